#include "rddi/dynamics.hpp"
#include "rddi/errors.hpp"
#include "rddi/fit.hpp"
#include "rddi/quad.hpp"
#include <cmath>

namespace rddi {

void Trajectory::push(double t, cplx ca, cplx cb) {
    times.push_back(t);
    C_A.push_back(ca);
    C_B.push_back(cb);
    const double pa = std::norm(ca), pb = std::norm(cb);
    P_A.push_back(pa);
    P_B.push_back(pb);
    P_L.push_back(1.0 - pa - pb);
}

namespace {

// sinh(z)/z, continued through z = 0; the series branch is what makes the
// degenerate-root (D -> 0) limit of the biexponential solution exact
cplx sinhc(cplx z) {
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

double sinhc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

struct WeakParams {
    double gA, gB;
    cplx D;
};

WeakParams weak_params(const CouplingSet& cs) {
    if (cs.regime == Regime::strong)
        throw RegimeError("weak-coupling closed form: set classifies as "
                          "strongly coupled to a field resonance");
    if (!cs.symmetric)
        throw RegimeError("weak-coupling closed form: couplings depend on "
                          "which transition frequency they are evaluated at");
    WeakParams p;
    p.gA = cs.gamma(0, 0).real();
    p.gB = cs.gamma(1, 1).real();
    const cplx d2 =
        0.25 * (p.gA - p.gB) * (p.gA - p.gB) + 4.0 * cs.K_AB * cs.K_BA;
    p.D = std::sqrt(d2);
    return p;
}

// transfer analysis needs a real exponent splitting
struct RateParams {
    double gA, gB;
    double S, D, Dp, Dm, Pq; // S = Dp + Dm, Pq = Dp Dm
    double kba2;
};

RateParams rate_params(const CouplingSet& cs) {
    const WeakParams wp = weak_params(cs);
    RateParams r;
    r.gA = wp.gA;
    r.gB = wp.gB;
    const cplx k2 = cs.K_AB * cs.K_BA;
    if (std::abs(k2.imag()) > 1e-9 * std::abs(k2))
        throw RegimeError("transfer analysis: coupling product carries a "
                          "phase; no monotone transfer curve");
    const double disc = 0.25 * (r.gA - r.gB) * (r.gA - r.gB) + 4.0 * k2.real();
    if (!(disc > 0.0))
        throw RegimeError("transfer analysis: shift-dominated coupling "
                          "oscillates; peak-slope time undefined");
    r.D = std::sqrt(disc);
    r.S = -(r.gA + r.gB);
    r.Dp = 0.5 * r.S + r.D;
    r.Dm = 0.5 * r.S - r.D;
    r.Pq = r.Dp * r.Dm;
    r.kba2 = std::norm(cs.K_BA);
    return r;
}

// rising inflection of P_B: root of Dp^2 e^{Dp t} + Dm^2 e^{Dm t} = (S^2/2)
// e^{S t/2}, taken on the branch before the population maximum
double t0_from(const RateParams& r) {
    const double s2 = r.S * r.S;
    double t0;
    if (r.D > 1e-4 * -r.S) {
        // conjugate form of the quadratic root: free of cancellation for
        // strongly asymmetric rates
        const double root =
            std::sqrt(std::max(0.0, 0.25 * s2 * s2 - 4.0 * r.Pq * r.Pq));
        t0 = std::log(2.0 * r.Dm * r.Dm / (0.5 * s2 + root)) / r.D;
    } else {
        t0 = 2.0 * (2.0 - std::sqrt(2.0)) / -r.S;
    }
    for (int i = 0; i < 60; ++i) {
        const double ep = std::exp(r.Dp * t0), em = std::exp(r.Dm * t0);
        const double es = std::exp(0.5 * r.S * t0);
        const double f = r.Dp * r.Dp * ep + r.Dm * r.Dm * em - 0.5 * s2 * es;
        const double fp = r.Dp * r.Dp * r.Dp * ep + r.Dm * r.Dm * r.Dm * em -
                          0.25 * s2 * r.S * es;
        if (fp == 0.0) break;
        const double step = f / fp;
        t0 -= step;
        if (std::abs(step) <= 1e-14 * std::abs(t0)) break;
    }
    if (!(t0 > 0.0) || !std::isfinite(t0))
        throw ConvergenceError("transfer time: inflection search failed");
    return t0;
}

double dPB_dt(const RateParams& r, double t) {
    const double sh = 0.5 * r.S;
    const double sc = sinhc(0.5 * r.D * t), sc2 = sinhc(r.D * t);
    return r.kba2 * std::exp(sh * t) * t * (sh * t * sc * sc + 2.0 * sc2);
}

CaseLabel rate_label(double ratio, const RateThresholds& thr) {
    if (ratio >= thr.much_greater) return CaseLabel::i;
    if (ratio <= 1.0 / thr.much_greater) return CaseLabel::iii;
    if (std::max(ratio, 1.0 / ratio) <= thr.comparable) return CaseLabel::ii;
    return CaseLabel::general;
}

} // namespace

AmplitudePair weak_amplitudes(const CouplingSet& cs, double t) {
    const WeakParams p = weak_params(cs);
    const double g = 0.5 * (p.gA - p.gB);
    const cplx z = 0.5 * p.D * t;
    const cplx env = std::exp(-0.25 * (p.gA + p.gB) * t);
    const cplx sc = sinhc(z);
    AmplitudePair out;
    out.C_A = env * (std::cosh(z) - g * (0.5 * t) * sc);
    out.C_B = env * cs.K_BA * t * sc;
    return out;
}

ProbabilityPair identical_probabilities(const CouplingSet& cs, double t) {
    const double gA = cs.gamma(0, 0).real(), gB = cs.gamma(1, 1).real();
    const double gs = std::max(std::abs(gA), std::abs(gB));
    if (std::abs(gA - gB) > 1e-9 * gs ||
        std::abs(cs.K_AB - cs.K_BA) > 1e-9 * std::abs(cs.K_AB))
        throw ConfigError("identical-atom closed form: pair is not "
                          "symmetric; use weak_amplitudes");
    const double gab = -2.0 * cs.K_AB.real();
    const double dab = cs.K_AB.imag();
    const double env = std::exp(-gB * t);
    ProbabilityPair p;
    p.P_A = 0.5 * (std::cosh(gab * t) + std::cos(2.0 * dab * t)) * env;
    p.P_B = 0.5 * (std::cosh(gab * t) - std::cos(2.0 * dab * t)) * env;
    return p;
}

double transfer_time_t0(const CouplingSet& cs) {
    return t0_from(rate_params(cs));
}

RateReport transfer_rate_w1(const CouplingSet& cs, const RateThresholds& thr) {
    const RateParams r = rate_params(cs);
    RateReport rep;
    rep.t0 = t0_from(r);
    rep.w1 = dPB_dt(r, rep.t0);
    // independent numeric route through the amplitude solution
    const double h = 1e-4 * rep.t0;
    auto slope = [&](double t) {
        const double hi = std::norm(weak_amplitudes(cs, t + h).C_B);
        const double lo = std::norm(weak_amplitudes(cs, t - h).C_B);
        return (hi - lo) / (2.0 * h);
    };
    const double tn = golden_max(slope, 0.01 * rep.t0, 3.0 * rep.t0, 1e-10);
    rep.w1_numeric = slope(tn);
    if (std::abs(rep.w1_numeric - rep.w1) > 1e-2 * rep.w1)
        throw ConvergenceError("transfer rate: closed form and numeric peak "
                               "slope disagree beyond 1%");
    rep.label = rate_label(r.gA / r.gB, thr);
    return rep;
}

RateReport golden_rule_rate(const CouplingSet& cs, const RateThresholds& thr) {
    const RateParams r = rate_params(cs);
    RateReport rep = transfer_rate_w1(cs, thr);
    // golden rule with the survival probability of the donor at the peak
    rep.w = 4.0 * r.kba2 / (r.gA + r.gB) * std::exp(-r.gA * rep.t0);
    rep.ratio = rep.w1 / rep.w;
    rep.corrected_ratio = rep.ratio * std::exp(r.gB * rep.t0);
    return rep;
}

StrongSolution classify_strong(const CouplingSet& cs, const ResonanceInfo& res,
                               double resonance_tolerance) {
    if (!(res.delta_omega_m > 0.0) || !(res.omega_m > 0.0))
        throw ConfigError("strong coupling: resonance data required");
    if (cs.Omega_plus == 0.0 && cs.Omega_minus == 0.0)
        throw ConfigError("strong coupling: coupling set built without "
                          "resonance data");
    if (!cs.symmetric)
        throw RegimeError("strong coupling: superposition states need a "
                          "symmetric pair");
    StrongSolution sol;
    sol.delta = cs.delta_AB.real();
    // the superposition energies sit at omega_tilde -+ delta
    const double det_p = std::abs(cs.omega_ref - sol.delta - res.omega_m);
    const double det_m = std::abs(cs.omega_ref + sol.delta - res.omega_m);
    sol.branch = det_p <= det_m ? +1 : -1;
    sol.detuning = std::min(det_p, det_m);
    sol.Omega = sol.branch > 0 ? cs.Omega_plus : cs.Omega_minus;
    const double omega_other = sol.branch > 0 ? cs.Omega_minus : cs.Omega_plus;
    if (!(sol.Omega > 10.0 * res.delta_omega_m))
        throw RegimeError("strong coupling: resonant superposition exchanges "
                          "slower than the mode decays");
    if (!(omega_other < 10.0 * res.delta_omega_m))
        throw RegimeError("strong coupling: both superpositions strongly "
                          "coupled; closed form invalid");
    if (sol.detuning > resonance_tolerance * sol.Omega)
        throw RegimeError("strong coupling: superposition energy misses the "
                          "mode by more than the tolerated fraction of the "
                          "exchange frequency");
    sol.Gamma_other =
        std::max(0.0, (cs.gamma(0, 0) -
                       double(sol.branch) * cs.gamma(0, 1)).real());
    // cross-term coherence is only qualitative when the detuned
    // superposition decays on the mode's own timescale
    const double fr = sol.Gamma_other / res.delta_omega_m;
    sol.narrow_line = fr < 1.0 / 3.0 || fr > 3.0;
    return sol;
}

AmplitudePair strong_amplitudes(const CouplingSet& cs, const ResonanceInfo& res,
                                double t, double resonance_tolerance) {
    const StrongSolution sol = classify_strong(cs, res, resonance_tolerance);
    const double c_res = std::exp(-0.5 * res.delta_omega_m * t) *
                         std::cos(0.5 * sol.Omega * t) / std::sqrt(2.0);
    const double c_oth = std::exp(-0.5 * sol.Gamma_other * t) / std::sqrt(2.0);
    const double cp = sol.branch > 0 ? c_res : c_oth;
    const double cm = sol.branch > 0 ? c_oth : c_res;
    const cplx rot = std::exp(I * sol.delta * t);
    AmplitudePair out;
    out.C_A = (cp * rot + cm / rot) / std::sqrt(2.0);
    out.C_B = (cp * rot - cm / rot) / std::sqrt(2.0);
    return out;
}

ProbabilityPair strong_probabilities(const CouplingSet& cs,
                                     const ResonanceInfo& res, double t,
                                     double resonance_tolerance) {
    const AmplitudePair a = strong_amplitudes(cs, res, t, resonance_tolerance);
    return {std::norm(a.C_A), std::norm(a.C_B)};
}

TrappingReport classify_regime(const CouplingSet& cs, const ResonanceInfo& res,
                               const RateThresholds& thr) {
    const StrongSolution sol = classify_strong(cs, res);
    TrappingReport rep;
    const double beat = 4.0 * std::abs(sol.delta);
    rep.label = beat == 0.0 ? CaseLabel::iii
                            : rate_label(beat / sol.Omega, thr);
    const double dominant =
        std::max({2.0 * std::abs(sol.delta), 0.5 * sol.Omega, sol.Omega});
    rep.cycle = two_pi / dominant;
    std::vector<double> edges;
    for (int i = 0; i <= 16; ++i) edges.push_back(rep.cycle * i / 16.0);
    auto pa = [&](double t) {
        return strong_probabilities(cs, res, t).P_A;
    };
    auto pb = [&](double t) {
        return strong_probabilities(cs, res, t).P_B;
    };
    rep.P_A_avg = integrate_panels(pa, edges, 32) / rep.cycle;
    rep.P_B_avg = integrate_panels(pb, edges, 32) / rep.cycle;
    rep.P_L_avg = 1.0 - rep.P_A_avg - rep.P_B_avg;
    return rep;
}

} // namespace rddi
