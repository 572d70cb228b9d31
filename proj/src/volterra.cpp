#include "rddi/volterra.hpp"
#include <algorithm>
#include <cmath>
#include <sstream>
#include "rddi/errors.hpp"
#include "rddi/quad.hpp"

namespace rddi {

namespace {

// kernel as a sum of complex exponentials: kappa(tau) = sum a_q e^{-i nu_q tau};
// analytic lines contribute one decaying mode each, sampled spectra one
// undamped mode per quadrature node
struct ModeSet {
    std::vector<cplx> nu;
    std::vector<cplx> a_AA, a_AB;
    double nu_max = 0.0;        // fastest oscillation, sets the dt requirement
    double slowest_decay = 0.0; // min line half-width; 0 when undamped modes exist
};

void push_mode(ModeSet& m, cplx nu, cplx aAA, cplx aAB) {
    m.nu.push_back(nu);
    m.a_AA.push_back(aAA);
    m.a_AB.push_back(aAB);
    m.nu_max = std::max(m.nu_max, std::abs(nu));
}

double interp(const std::vector<double>& x, const std::vector<double>& y, double xi) {
    auto it = std::upper_bound(x.begin(), x.end(), xi);
    std::size_t k = std::min(std::max<std::ptrdiff_t>(it - x.begin(), 1),
                             static_cast<std::ptrdiff_t>(x.size()) - 1);
    const double u = (xi - x[k - 1]) / (x[k] - x[k - 1]);
    return y[k - 1] * (1.0 - u) + y[k] * u;
}

void validate(const KernelSpec& s) {
    for (const auto& l : s.lines_AA)
        if (l.half_width <= 0.0 || l.gamma_peak < 0.0)
            throw ConfigError("lorentzian line needs half_width > 0 and gamma_peak >= 0");
    for (const auto& l : s.lines_AB)
        if (l.half_width <= 0.0)
            throw ConfigError("lorentzian line needs half_width > 0");
    if (!s.omega.empty()) {
        if (s.omega.size() < 2 || s.gamma_AA.size() != s.omega.size() ||
            s.gamma_AB.size() != s.omega.size())
            throw ConfigError("tabulated kernel needs matching omega/gamma_AA/gamma_AB grids");
        for (std::size_t i = 1; i < s.omega.size(); ++i)
            if (s.omega[i] <= s.omega[i - 1])
                throw ConfigError("tabulated kernel grid must increase strictly");
        for (double g : s.gamma_AA)
            if (g < 0.0)
                throw ConfigError("diagonal rate table must be non-negative");
    }
    if (s.gamma_flat != 0.0 && s.flat_window <= 0.0)
        throw ConfigError("flat spectral pedestal needs flat_window > 0");
}

// subdivide [e0,e1] so a 24-point panel still tracks e^{-i w tau_eff}
void quadrature_modes(ModeSet& m, double e0, double e1, double omega_tilde,
                      double tau_eff, const std::function<double(double)>& gAA,
                      const std::function<double(double)>& gAB) {
    constexpr int n = 24;
    const GaussRule& gr = gauss_legendre(n);
    const double max_width = 2.2 * n / std::max(tau_eff, 1e-300);
    const int pieces = std::max(1, static_cast<int>(std::ceil((e1 - e0) / max_width)));
    for (int p = 0; p < pieces; ++p) {
        const double a = e0 + (e1 - e0) * p / pieces;
        const double b = e0 + (e1 - e0) * (p + 1) / pieces;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < n; ++q) {
            const double w = mid + half * gr.x[q];
            const double wq = half * gr.w[q];
            push_mode(m, cplx(w - omega_tilde, 0.0),
                      -wq * gAA(w) / two_pi, -wq * gAB(w) / two_pi);
        }
        if (m.nu.size() > 20000)
            throw ConvergenceError(
                "kernel quadrature explodes: memory depth needs > 20000 modes; "
                "set memory_cut or narrow the spectral window");
    }
}

ModeSet build_modes(const KernelSpec& s, double omega_tilde, double tau_eff) {
    ModeSet m;
    m.slowest_decay = std::numeric_limits<double>::infinity();
    for (const auto& l : s.lines_AA) {
        push_mode(m, cplx(l.omega_m - omega_tilde, -l.half_width),
                  -0.5 * l.gamma_peak * l.half_width, 0.0);
        m.slowest_decay = std::min(m.slowest_decay, l.half_width);
    }
    for (const auto& l : s.lines_AB) {
        push_mode(m, cplx(l.omega_m - omega_tilde, -l.half_width), 0.0,
                  -0.5 * l.gamma_peak * l.half_width);
        m.slowest_decay = std::min(m.slowest_decay, l.half_width);
    }
    if (!s.omega.empty()) {
        m.slowest_decay = 0.0;
        auto gAA = [&](double w) { return interp(s.omega, s.gamma_AA, w); };
        auto gAB = [&](double w) { return interp(s.omega, s.gamma_AB, w); };
        std::vector<double> edges =
            s.cluster_width > 0.0
                ? clustered_edges(s.omega.front(), s.omega.back(),
                                  s.cluster_omega, s.cluster_width)
                : std::vector<double>{s.omega.front(), s.omega.back()};
        for (std::size_t e = 1; e < edges.size(); ++e)
            quadrature_modes(m, edges[e - 1], edges[e], omega_tilde, tau_eff, gAA, gAB);
    }
    if (s.gamma_flat != 0.0) {
        m.slowest_decay = 0.0;
        auto gAA = [&](double) { return s.gamma_flat; };
        auto gAB = [&](double) { return 0.0; };
        quadrature_modes(m, omega_tilde - s.flat_window, omega_tilde + s.flat_window,
                         omega_tilde, tau_eff, gAA, gAB);
    }
    return m;
}

struct KernelTable {
    std::vector<cplx> AA, AB; // kappa at delays 0, h, 2h, ...
};

KernelTable tabulate(const ModeSet& m, double h, std::size_t count) {
    KernelTable t;
    t.AA.assign(count, cplx(0.0));
    t.AB.assign(count, cplx(0.0));
    for (std::size_t q = 0; q < m.nu.size(); ++q) {
        const cplx step = std::exp(-I * m.nu[q] * h);
        cplx phase = 1.0;
        for (std::size_t k = 0; k < count; ++k) {
            t.AA[k] += m.a_AA[q] * phase;
            t.AB[k] += m.a_AB[q] * phase;
            phase *= step;
        }
    }
    return t;
}

} // namespace

Eigen::Matrix2cd kernel_at(const KernelSpec& spec, double omega_tilde, double tau) {
    validate(spec);
    ModeSet m = build_modes(spec, omega_tilde, std::max(tau, 1e-12));
    cplx aa = 0.0, ab = 0.0;
    for (std::size_t q = 0; q < m.nu.size(); ++q) {
        const cplx phase = std::exp(-I * m.nu[q] * tau);
        aa += m.a_AA[q] * phase;
        ab += m.a_AB[q] * phase;
    }
    Eigen::Matrix2cd k;
    k << aa, ab, ab, aa;
    return k;
}

Eigen::Matrix2cd kernel_markov_limit(const KernelSpec& spec, double omega_tilde) {
    validate(spec);
    cplx aa = 0.0, ab = 0.0;
    for (const auto& l : spec.lines_AA)
        aa += -0.5 * l.gamma_peak * l.half_width /
              cplx(l.half_width, l.omega_m - omega_tilde);
    for (const auto& l : spec.lines_AB)
        ab += -0.5 * l.gamma_peak * l.half_width /
              cplx(l.half_width, l.omega_m - omega_tilde);
    if (!spec.omega.empty()) {
        auto gAA = [&](double w) { return interp(spec.omega, spec.gamma_AA, w); };
        auto gAB = [&](double w) { return interp(spec.omega, spec.gamma_AB, w); };
        const double lo = spec.omega.front(), hi = spec.omega.back();
        if (omega_tilde > lo && omega_tilde < hi) {
            aa += cplx(-0.5 * gAA(omega_tilde),
                       pv_integral(gAA, lo, hi, omega_tilde) / two_pi);
            ab += cplx(-0.5 * gAB(omega_tilde),
                       pv_integral(gAB, lo, hi, omega_tilde) / two_pi);
        } else {
            aa += I / two_pi *
                  integrate([&](double w) { return gAA(w) / (w - omega_tilde); }, lo, hi);
            ab += I / two_pi *
                  integrate([&](double w) { return gAB(w) / (w - omega_tilde); }, lo, hi);
        }
    }
    if (spec.gamma_flat != 0.0)
        aa += -0.5 * spec.gamma_flat; // symmetric window: no shift
    Eigen::Matrix2cd k;
    k << aa, ab, ab, aa;
    return k + spec.markov;
}

Trajectory volterra_solve(const KernelSpec& spec, const CouplingSet& coupling,
                          double t_max, double dt, Eigen::Vector2cd C0) {
    validate(spec);
    if (!(dt > 0.0) || !(t_max > dt))
        throw ConfigError("volterra_solve needs 0 < dt < t_max");
    const std::size_t n_steps = static_cast<std::size_t>(std::ceil(t_max / dt));
    if (n_steps > 2000000)
        throw ConvergenceError("volterra_solve: more than 2e6 steps requested");

    // memory horizon: user cut, or the point where analytic lines have decayed
    double cut = spec.memory_cut > 0.0 ? spec.memory_cut : t_max;
    ModeSet probe = build_modes(spec, coupling.omega_ref, 1e-12);
    if (spec.omega.empty() && spec.gamma_flat == 0.0 &&
        std::isfinite(probe.slowest_decay) && probe.slowest_decay > 0.0)
        cut = std::min(cut, 45.0 / probe.slowest_decay);
    cut = std::min(cut, t_max);

    ModeSet modes = build_modes(spec, coupling.omega_ref, cut);
    if (modes.nu_max * dt > 0.7) {
        std::ostringstream msg;
        msg << "dt = " << dt << " cannot track the kernel oscillation at |w - wt| = "
            << modes.nu_max << "; need dt <= " << 0.7 / modes.nu_max;
        throw ConvergenceError(msg.str());
    }
    if (coupling.Omega_plus > 0.0 && coupling.Omega_plus * dt > 0.2 * pi) {
        std::ostringstream msg;
        msg << "dt = " << dt << " cannot track the exchange frequency "
            << coupling.Omega_plus << "; need dt <= " << 0.2 * pi / coupling.Omega_plus;
        throw ConvergenceError(msg.str());
    }
    if (!spec.omega.empty() && spec.cluster_width > 0.0) {
        const double lo = spec.cluster_omega - 5.0 * spec.cluster_width;
        const double hi = spec.cluster_omega + 5.0 * spec.cluster_width;
        for (std::size_t i = 1; i < spec.omega.size(); ++i)
            if (spec.omega[i] > lo && spec.omega[i - 1] < hi &&
                spec.omega[i] - spec.omega[i - 1] > spec.cluster_width)
                throw ConvergenceError(
                    "frequency grid under-resolves the mode: spacing exceeds its half-width");
    }

    const std::size_t K =
        std::min<std::size_t>(n_steps, static_cast<std::size_t>(std::ceil(cut / dt)));
    KernelTable kt = tabulate(modes, dt, K + 1);

    Eigen::Matrix2cd k0;
    k0 << kt.AA[0], kt.AB[0], kt.AB[0], kt.AA[0];
    const Eigen::Matrix2cd Ais =
        (Eigen::Matrix2cd::Identity() - 0.5 * dt * spec.markov - 0.25 * dt * dt * k0)
            .inverse();

    std::vector<cplx> ca(n_steps + 1), cb(n_steps + 1);
    ca[0] = C0(0);
    cb[0] = C0(1);
    Trajectory out;
    out.push(0.0, ca[0], cb[0]);
    Eigen::Vector2cd F_prev = Eigen::Vector2cd::Zero(); // memory integral at t_{n-1}
    Eigen::Vector2cd C_prev = C0;

    for (std::size_t n = 1; n <= n_steps; ++n) {
        cplx gA = 0.0, gB = 0.0;
        const std::size_t j0 = n > K ? n - K : 0;
        // half-weight endpoint of the (possibly truncated) trapezoid
        {
            const std::size_t k = n - j0;
            gA += 0.5 * (kt.AA[k] * ca[j0] + kt.AB[k] * cb[j0]);
            gB += 0.5 * (kt.AB[k] * ca[j0] + kt.AA[k] * cb[j0]);
        }
        for (std::size_t j = j0 + 1; j < n; ++j) {
            const std::size_t k = n - j;
            gA += kt.AA[k] * ca[j] + kt.AB[k] * cb[j];
            gB += kt.AB[k] * ca[j] + kt.AA[k] * cb[j];
        }
        const Eigen::Vector2cd G = dt * Eigen::Vector2cd(gA, gB);
        const Eigen::Vector2cd rhs =
            C_prev + 0.5 * dt * (spec.markov * C_prev + F_prev + G);
        const Eigen::Vector2cd C = Ais * rhs;
        ca[n] = C(0);
        cb[n] = C(1);
        F_prev = G + 0.5 * dt * (k0 * C);
        C_prev = C;
        out.push(n * dt, C(0), C(1));
    }
    return out;
}

} // namespace rddi
