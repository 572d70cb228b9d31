#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <cmath>
#include "rddi/errors.hpp"
#include "rddi/spectrum.hpp"

using namespace rddi;
using Eigen::Vector3cd;
using Eigen::Vector3d;

namespace {

CouplingSet make_weak_cs(double g, double gab, double delta,
                         double omega_ref = 1.0) {
    CouplingSet cs;
    cs.omega_ref = omega_ref;
    cs.gamma = Eigen::Matrix2cd::Zero();
    cs.gamma(0, 0) = cs.gamma(1, 1) = g;
    cs.gamma(0, 1) = cs.gamma(1, 0) = gab;
    cs.K_AB = cs.K_BA = cplx(-0.5 * gab, delta);
    cs.delta_AB = cs.delta_BA = delta;
    cs.symmetric = true;
    return cs;
}

CouplingSet make_strong_cs(double g, double gab, double delta, double omega_m,
                           double dw, double omega_ref) {
    CouplingSet cs = make_weak_cs(g, gab, delta, omega_ref);
    cs.omega_m = omega_m;
    cs.delta_omega_m = dw;
    cs.Omega_plus = std::sqrt(2.0 * (g + gab) * dw);
    cs.Omega_minus = std::sqrt(std::max(0.0, 2.0 * (g - gab) * dw));
    cs.regime = Regime::strong;
    return cs;
}

EmissionWeights make_w(const Vector3cd& fa, const Vector3cd& fb,
                       double omega_tilde = 1.0, double gamma0 = 1e-6) {
    EmissionWeights w;
    w.F_A = fa;
    w.F_B = fb;
    w.omega_tilde = omega_tilde;
    w.gamma0 = gamma0;
    return w;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> union_grid(
    const std::vector<double>& base,
    const std::vector<std::pair<double, double>>& windows, int pts = 161) {
    std::vector<double> g = base;
    for (const auto& [c, w] : windows) {
        const auto win = linspace(c - 8.0 * w, c + 8.0 * w, pts);
        g.insert(g.end(), win.begin(), win.end());
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

Trajectory tabulate_weak(const CouplingSet& cs, double t_max, double dt) {
    Trajectory tr;
    for (double t = 0.0; t <= t_max * (1.0 + 1e-12); t += dt) {
        const AmplitudePair a = weak_amplitudes(cs, t);
        tr.push(t, a.C_A, a.C_B);
    }
    return tr;
}

double linf_peak_mismatch(const SpectrumResult& test,
                          const SpectrumResult& ref, double floor_frac) {
    REQUIRE(test.omega_S == ref.omega_S);
    const double smax = *std::max_element(ref.S.begin(), ref.S.end());
    double worst = 0.0;
    for (size_t i = 0; i < ref.S.size(); ++i) {
        if (ref.S[i] < floor_frac * smax) continue;
        worst = std::max(worst, std::abs(test.S[i] - ref.S[i]) / ref.S[i]);
    }
    return worst;
}

} // namespace

TEST_CASE("detector weight: free-space far zone falls off as 1/r") {
    Atom a;
    a.position_lambda = Vector3d::Zero();
    a.dipole = Vector3cd::UnitZ();
    a.gamma0 = 1e-6;
    a.omega = a.omega_tilde = 1.0;
    const Environment vac{};
    // quarter-wave offsets keep sin(kr) at full swing at both distances, so
    // the on-shell magnitude shows the plain radiation-zone envelope
    const double r1 = 20.25, r2 = 40.75;
    for (WeightMode mode : {WeightMode::kk, WeightMode::delta_only}) {
        const Vector3cd f1 = emission_weight_F(a, Vector3d(r1, 0.0, 0.0), vac, mode);
        const Vector3cd f2 = emission_weight_F(a, Vector3d(r2, 0.0, 0.0), vac, mode);
        CHECK(f1.norm() / f2.norm() == doctest::Approx(r2 / r1).epsilon(2e-2));
        // dipole along z, separation along x: only the zz column survives
        CHECK(std::abs(f1[0]) < 1e-14 * f1.norm());
        CHECK(std::abs(f1[1]) < 1e-14 * f1.norm());
    }
}

TEST_CASE("detector weight: principal-value route agrees with the closed one") {
    Atom a;
    a.dipole = Vector3cd::UnitZ();
    a.gamma0 = 1e-6;
    a.omega = a.omega_tilde = 1.0;
    const Environment vac{};
    const Vector3d det(3.0, 0.0, 0.0);
    const Vector3cd fkk = emission_weight_F(a, det, vac, WeightMode::kk);
    const Vector3cd fpv = emission_weight_F(a, det, vac, WeightMode::pv_quadrature);
    const Vector3cd fd = emission_weight_F(a, det, vac, WeightMode::delta_only);
    CHECK((fkk - fpv).norm() < 1e-2 * fkk.norm());
    // the dispersive part is a genuine contribution at finite distance
    CHECK((fkk - fd).norm() > 1e-3 * fkk.norm());

    Atom circ = a;
    circ.dipole = Vector3cd(1.0, cplx(0.0, 1.0), 0.0) / std::sqrt(2.0);
    CHECK_THROWS_AS(emission_weight_F(circ, det, vac, WeightMode::pv_quadrature),
                    ConfigError);
    CHECK_THROWS_AS(emission_weight_F(a, Vector3d::Zero(), vac), ConfigError);
}

TEST_CASE("detector weight: sphere resonance separates the prescriptions") {
    const SphereGeometry geo{20.0, Material::drude_lorentz(0.5, 1e-6)};
    Environment env;
    env.sphere = geo;
    const double omega_m = 1.050486699;
    const double dw = 4.890866e-7; // half width of the mode
    Atom a;
    a.position_lambda = Vector3d(0.0, 0.0, 10.02);
    a.dipole = Vector3cd::UnitZ();
    a.gamma0 = 1e-6;
    a.omega = a.omega_tilde = omega_m + dw; // one half-width off centre
    const Vector3d det(0.0, 0.0, 20.0);
    PVOptions pv;
    pv.omega_cut = 6.0; // sphere is transparent past a few omega_T
    const Vector3cd fkk = emission_weight_F(a, det, env, WeightMode::kk, {}, pv);
    const Vector3cd fd = emission_weight_F(a, det, env, WeightMode::delta_only);
    CHECK((fkk - fd).norm() > 2e-2 * fd.norm());

    // pair-line weight is the on-shell weight at the mode centre, rescaled
    ResonanceInfo res;
    res.omega_m = omega_m;
    res.delta_omega_m = dw;
    res.strength = 1.0;
    const double Omega = 1.28e-4;
    Atom am = a;
    am.omega = am.omega_tilde = omega_m;
    const Vector3cd wgt = emission_weight_W(am, det, env, res, Omega);
    const Vector3cd fdm = emission_weight_F(am, det, env, WeightMode::delta_only);
    CHECK((wgt - fdm * (dw / Omega)).norm() < 1e-10 * wgt.norm());
    CHECK_THROWS_AS(emission_weight_W(a, det, env, res, 0.0), ConfigError);
}

TEST_CASE("detector weight: mirror-symmetric pair radiates equally") {
    // dipoles normal to the plane spanned by the positions: the propagator
    // column reduces to its transverse yy entry, identical for both atoms
    Atom a, b;
    a.position_lambda = Vector3d(0.0, 0.0, 5.0);
    b.position_lambda = Vector3d(0.0, 0.0, -5.0);
    a.dipole = b.dipole = Vector3cd::UnitY();
    a.gamma0 = b.gamma0 = 1e-6;
    a.omega = a.omega_tilde = b.omega = b.omega_tilde = 0.9;
    const Vector3d det(12.0, 0.0, 0.0);

    const Environment vac{};
    Vector3cd fa = emission_weight_F(a, det, vac, WeightMode::kk);
    Vector3cd fb = emission_weight_F(b, det, vac, WeightMode::kk);
    CHECK((fa - fb).norm() < 1e-12 * fa.norm());

    Environment env;
    env.sphere = SphereGeometry{2.0, Material::drude_lorentz(0.5, 1e-6)};
    fa = emission_weight_F(a, det, env, WeightMode::delta_only);
    fb = emission_weight_F(b, det, env, WeightMode::delta_only);
    CHECK((fa - fb).norm() < 1e-10 * fa.norm());
}

TEST_CASE("doublet: degenerate shift collapses to a single exact line") {
    const double g = 2e-6;
    CouplingSet cs = make_weak_cs(g, 0.0, 0.0);
    const Vector3cd fa(0.0, 0.0, cplx(1e-3, 2e-4));
    const EmissionWeights w = make_w(fa, Vector3cd::Zero());
    const auto grid = linspace(1.0 - 10.0 * g, 1.0 + 10.0 * g, 4001);
    const SpectrumResult sr = weak_spectrum(cs, w, grid);
    const double nrm = 64.0 * pi * w.gamma0 / 3.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double dw = grid[i] - 1.0;
        const double ref = fa.squaredNorm() / (dw * dw + 0.25 * g * g) * nrm;
        CHECK(sr.S[i] == doctest::Approx(ref).epsilon(1e-12));
        CHECK(sr.S[i] >= 0.0);
    }
    const auto lines = extract_lines(sr);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].position == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lines[0].width == doctest::Approx(g).epsilon(2e-2));
    CHECK(lines[0].weight ==
          doctest::Approx(fa.squaredNorm() * nrm).epsilon(2e-2));
}

TEST_CASE("doublet: two lines split by twice the shift") {
    const double g = 1e-6, gab = 0.3e-6, delta = 4e-5;
    CouplingSet cs = make_weak_cs(g, gab, delta);
    const Vector3cd fa(0.0, 0.0, 1e-3), fb(0.0, 0.0, 0.4e-3);
    const EmissionWeights w = make_w(fa, fb);
    const auto grid = default_spectrum_grid(cs);
    const SpectrumResult sr = weak_spectrum(cs, w, grid);

    REQUIRE(sr.lines.size() == 2);
    CHECK(sr.lines[0].position == doctest::Approx(1.0 - delta).epsilon(1e-12));
    CHECK(sr.lines[0].kind == LineKind::doublet_plus);
    CHECK(sr.lines[1].position == doctest::Approx(1.0 + delta).epsilon(1e-12));
    CHECK(sr.lines[1].kind == LineKind::doublet_minus);
    CHECK(sr.lines[0].width == doctest::Approx(g + gab).epsilon(1e-12));
    CHECK(sr.lines[1].width == doctest::Approx(g - gab).epsilon(1e-12));

    const auto fit = extract_lines(sr);
    REQUIRE(fit.size() == 2);
    CHECK(fit[1].position - fit[0].position ==
          doctest::Approx(2.0 * delta).epsilon(1e-3));
    CHECK(fit[0].width == doctest::Approx(g + gab).epsilon(2e-2));
    CHECK(fit[1].width == doctest::Approx(g - gab).epsilon(2e-2));
    const double nrm = 64.0 * pi * w.gamma0 / 3.0;
    CHECK(fit[0].weight ==
          doctest::Approx((fa + fb).squaredNorm() * nrm).epsilon(3e-2));
    CHECK(fit[1].weight ==
          doctest::Approx((fa - fb).squaredNorm() * nrm).epsilon(3e-2));
}

TEST_CASE("doublet: equal weights quench the antisymmetric line") {
    CouplingSet cs = make_weak_cs(1e-6, 0.3e-6, 4e-5);
    const Vector3cd fa(0.0, 0.0, cplx(1e-3, 5e-4));
    const auto grid = default_spectrum_grid(cs);

    SpectrumResult sr = weak_spectrum(cs, make_w(fa, fa), grid);
    auto lines = extract_lines(sr);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].position == doctest::Approx(1.0 - 4e-5).epsilon(1e-8));

    sr = weak_spectrum(cs, make_w(fa, -fa), grid);
    lines = extract_lines(sr);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].position == doctest::Approx(1.0 + 4e-5).epsilon(1e-8));
}

TEST_CASE("doublet: regime and consistency guards") {
    CouplingSet cs = make_weak_cs(1e-6, 0.3e-6, 4e-5);
    const Vector3cd fa(0.0, 0.0, 1e-3);
    const EmissionWeights w = make_w(fa, fa);
    const auto grid = linspace(0.999, 1.001, 101);

    CouplingSet bad = cs;
    bad.symmetric = false;
    CHECK_THROWS_AS(weak_spectrum(bad, w, grid), RegimeError);

    // one superposition state sits right on a narrow mode
    CouplingSet ringing =
        make_strong_cs(1e-2, 1e-2, -2e-3, 1.002, 5e-7, 1.0);
    CHECK_THROWS_AS(weak_spectrum(ringing, w, grid), RegimeError);

    EmissionWeights shifted = w;
    shifted.omega_tilde = 1.1;
    CHECK_THROWS_AS(weak_spectrum(cs, shifted, grid), ConfigError);

    CouplingSet dark = make_weak_cs(1e-6, 1e-6, 4e-5);
    CHECK_THROWS_AS(weak_spectrum(dark, w, grid), ConfigError);
    CHECK_THROWS_AS(weak_spectrum(cs, w, {}), ConfigError);
}

TEST_CASE("strong triplet: pair lines split by the Rabi frequency") {
    // shift chosen large enough that the three lines do not interfere at
    // the percent level probed below
    const double g = 1e-2, gab = g - 1e-4, dw = 2e-5;
    const double delta = -2e-2, omega_m = 1.02;
    CouplingSet cs = make_strong_cs(g, gab, delta, omega_m, dw, 1.0);
    ResonanceInfo res;
    res.omega_m = omega_m;
    res.delta_omega_m = dw;
    res.strength = 1.0;
    const double Omega = cs.Omega_plus;
    const double go = g - gab;

    EmissionWeights w = make_w(Vector3cd(0.0, 0.0, 2e-3),
                               Vector3cd(0.0, 0.0, 0.5e-3));
    w.W_A = w.F_A * (dw / Omega);
    w.W_B = w.F_B * (dw / Omega);

    const auto grid = union_grid(
        linspace(0.97, 1.03, 601),
        {{omega_m - 0.5 * Omega, dw}, {omega_m + 0.5 * Omega, dw},
         {1.0 + delta, go}});
    const SpectrumResult sr = strong_spectrum(cs, res, w, grid);

    REQUIRE(sr.lines.size() == 3);
    CHECK(sr.lines[0].position == doctest::Approx(1.0 + delta).epsilon(1e-12));
    CHECK(sr.lines[0].kind == LineKind::residual);
    CHECK(sr.lines[0].width == doctest::Approx(go).epsilon(1e-12));
    CHECK(sr.lines[1].position ==
          doctest::Approx(omega_m - 0.5 * Omega).epsilon(1e-12));
    CHECK(sr.lines[2].position ==
          doctest::Approx(omega_m + 0.5 * Omega).epsilon(1e-12));
    CHECK(sr.lines[1].width == doctest::Approx(dw).epsilon(1e-12));
    CHECK(sr.lines[1].weight == doctest::Approx(sr.lines[2].weight));

    const auto fit = extract_lines(sr);
    REQUIRE(fit.size() == 3);
    CHECK(fit[2].position - fit[1].position ==
          doctest::Approx(Omega).epsilon(1e-3));
    CHECK(fit[1].width == doctest::Approx(dw).epsilon(3e-2));
    CHECK(fit[2].width == doctest::Approx(dw).epsilon(3e-2));
    CHECK(fit[1].weight == doctest::Approx(fit[2].weight).epsilon(3e-2));
    const double nrm = 64.0 * pi * w.gamma0 / 3.0;
    CHECK(fit[1].weight ==
          doctest::Approx((w.W_A + w.W_B).squaredNorm() * nrm).epsilon(5e-2));
    CHECK(fit[0].width == doctest::Approx(go).epsilon(3e-2));
}

TEST_CASE("strong triplet: destructive weight combinations suppress lines") {
    const double g = 1e-2, gab = g - 2e-4, dw = 2e-5;
    CouplingSet cs = make_strong_cs(g, gab, -2e-3, 1.002, dw, 1.0);
    ResonanceInfo res;
    res.omega_m = 1.002;
    res.delta_omega_m = dw;
    res.strength = 1.0;
    const double Omega = cs.Omega_plus;
    const auto grid = union_grid(
        linspace(1.0 - 6e-3, 1.0 + 6e-3, 501),
        {{1.002 - 0.5 * Omega, dw}, {1.002 + 0.5 * Omega, dw},
         {1.0 - 2e-3, g - gab}});

    EmissionWeights w = make_w(Vector3cd(0.0, 0.0, 2e-3),
                               Vector3cd(0.0, 0.0, 0.5e-3));
    w.W_A = Vector3cd(0.0, 0.0, 3e-4);
    w.W_B = -w.W_A; // pair lines cancel
    auto lines = extract_lines(strong_spectrum(cs, res, w, grid));
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].position == doctest::Approx(1.0 - 2e-3).epsilon(1e-8));

    w.F_B = w.F_A; // detuned line cancels
    w.W_B = w.W_A;
    lines = extract_lines(strong_spectrum(cs, res, w, grid));
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].position - lines[0].position ==
          doctest::Approx(Omega).epsilon(1e-3));

    EmissionWeights empty = make_w(Vector3cd(0.0, 0.0, 1e-3),
                                   Vector3cd(0.0, 0.0, 1e-3));
    CHECK_THROWS_AS(strong_spectrum(cs, res, empty, grid), ConfigError);

    // vanishing width on the detuned line is only allowed if it is quenched
    CouplingSet flat = make_strong_cs(g, g, -2e-3, 1.002, dw, 1.0);
    EmissionWeights wres = w;
    wres.F_B = -w.F_A;
    CHECK_THROWS_AS(strong_spectrum(flat, res, wres, grid), ConfigError);
}

TEST_CASE("finite window reproduces the doublet on the peak region") {
    const double g = 1e-6, gab = 0.3e-6, delta = 4e-5;
    CouplingSet cs = make_weak_cs(g, gab, delta);
    const Vector3cd fa(0.0, 0.0, 1e-3), fb(0.0, 0.0, 0.4e-3);
    const EmissionWeights w = make_w(fa, fb);
    const auto grid = default_spectrum_grid(cs);
    const SpectrumResult ref = weak_spectrum(cs, w, grid);

    const double T = 2e7; // 20 / gamma0
    const Trajectory tr = tabulate_weak(cs, T, 1250.0);
    const SpectrumResult st = finite_time_spectrum(tr, w, grid, T);
    CHECK(!st.truncated);
    CHECK(linf_peak_mismatch(st, ref, 0.05) < 2e-2);
    for (double s : st.S) CHECK(s >= 0.0);

    // extraction on the windowed spectrum finds the same two lines
    const auto fit = extract_lines(st);
    REQUIRE(fit.size() == 2);
    CHECK(fit[0].position == doctest::Approx(1.0 - delta).epsilon(1e-8));
    CHECK(fit[1].position == doctest::Approx(1.0 + delta).epsilon(1e-8));
}

TEST_CASE("finite window: short windows blur, longer windows converge") {
    const double g = 1e-6, gab = 0.3e-6, delta = 4e-5;
    CouplingSet cs = make_weak_cs(g, gab, delta);
    const EmissionWeights w =
        make_w(Vector3cd(0.0, 0.0, 1e-3), Vector3cd(0.0, 0.0, 0.4e-3));
    const auto grid = default_spectrum_grid(cs);
    const SpectrumResult ref = weak_spectrum(cs, w, grid);
    const Trajectory tr = tabulate_weak(cs, 1.7e7, 1250.0);

    // a window much shorter than the decay registers almost nothing
    const SpectrumResult s0 = finite_time_spectrum(tr, w, grid, 1e3);
    const double refmax = *std::max_element(ref.S.begin(), ref.S.end());
    CHECK(*std::max_element(s0.S.begin(), s0.S.end()) < 1e-5 * refmax);
    CHECK(s0.truncated);

    double prev = 1e9;
    for (double T : {2.1e6, 4.2e6, 8.4e6, 1.65e7}) {
        const SpectrumResult st = finite_time_spectrum(tr, w, grid, T);
        const double err = linf_peak_mismatch(st, ref, 0.05);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(finite_time_spectrum(tr, w, grid, 2.1e6).truncated);
    // asking past the trajectory end flags the result as truncated
    CHECK(finite_time_spectrum(tr, w, grid, 4e7).truncated);
}

TEST_CASE("finite window on a resonant-exchange trajectory: triplet emerges") {
    const double g = 1e-2, gab = g - 1e-4, dw = 2e-5;
    const double delta = -2e-2, omega_m = 1.02;
    CouplingSet cs = make_strong_cs(g, gab, delta, omega_m, dw, 1.0);
    ResonanceInfo res;
    res.omega_m = omega_m;
    res.delta_omega_m = dw;
    res.strength = 1.0;
    const double Omega = cs.Omega_plus;
    const double go = g - gab;

    EmissionWeights w = make_w(Vector3cd(0.0, 0.0, 2e-3),
                               Vector3cd(0.0, 0.0, 0.5e-3));
    w.W_A = w.F_A * (dw / Omega);
    w.W_B = w.F_B * (dw / Omega);

    Trajectory tr;
    const double T = 6e5, dt = 25.0;
    for (double t = 0.0; t <= T; t += dt) {
        const AmplitudePair a = strong_amplitudes(cs, res, t);
        tr.push(t, a.C_A, a.C_B);
    }
    const auto grid = union_grid(
        linspace(0.97, 1.03, 601),
        {{omega_m - 0.5 * Omega, dw}, {omega_m + 0.5 * Omega, dw},
         {1.0 + delta, go}});
    const SpectrumResult st = finite_time_spectrum(tr, w, grid, T);
    CHECK(st.truncated); // mode-width decay is not over at T

    // prominence above the saddle the (additively interfering) frozen pair
    // tails produce midway between the pair lines
    const auto fit = extract_lines(st, 4e-3);
    REQUIRE(fit.size() == 3);
    CHECK(fit[0].position == doctest::Approx(1.0 + delta).epsilon(1e-6));
    CHECK(fit[1].position ==
          doctest::Approx(omega_m - 0.5 * Omega).epsilon(1e-6));
    CHECK(fit[2].position ==
          doctest::Approx(omega_m + 0.5 * Omega).epsilon(1e-6));

    // the detuned line carries the correct weight...
    const double nrm = 64.0 * pi * w.gamma0 / 3.0;
    CHECK(fit[0].weight ==
          doctest::Approx((w.F_A - w.F_B).squaredNorm() * nrm).epsilon(0.15));

    // ...but the pair lines, driven here by the frozen atomic amplitudes
    // rather than the mode emission, overshoot the stationary weight by
    // (Omega / 2 dw)^2: the single-excitation reduction keeps only the
    // atomic part of the radiating dipole.  Recorded, not absorbed.
    const double overshoot = std::pow(Omega / (2.0 * dw), 2);
    const double ratio =
        fit[1].weight / ((w.W_A + w.W_B).squaredNorm() * nrm);
    CHECK(ratio > 0.5 * overshoot);
    CHECK(ratio < 2.0 * overshoot);
}

TEST_CASE("finite window: trajectory validation") {
    const EmissionWeights w =
        make_w(Vector3cd(0.0, 0.0, 1e-3), Vector3cd::Zero());
    const auto grid = linspace(0.999, 1.001, 11);

    Trajectory bad;
    bad.push(1.0, cplx(1.0), cplx(0.0));
    bad.push(2.0, cplx(0.9), cplx(0.0));
    CHECK_THROWS_AS(finite_time_spectrum(bad, w, grid, 1.5), ConfigError);

    Trajectory tr;
    tr.push(0.0, cplx(1.0), cplx(0.0));
    tr.push(1.0, cplx(0.9), cplx(0.0));
    CHECK_THROWS_AS(finite_time_spectrum(tr, w, grid, -1.0), ConfigError);
    CHECK_THROWS_AS(finite_time_spectrum(tr, w, {}, 1.0), ConfigError);
    tr.C_B.pop_back();
    CHECK_THROWS_AS(finite_time_spectrum(tr, w, grid, 1.0), ConfigError);
}

TEST_CASE("grid and extraction edge cases") {
    CouplingSet empty;
    CHECK_THROWS_AS(default_spectrum_grid(empty), ConfigError);

    CouplingSet cs = make_weak_cs(1e-6, 0.3e-6, 4e-5);
    const auto grid = default_spectrum_grid(cs, 2001);
    CHECK(grid.size() >= 2001);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    SpectralLine focus{1.0 + 4e-5, 1e-7, 0.0, LineKind::residual};
    const auto fine = default_spectrum_grid(cs, 2001, {focus});
    CHECK(fine.size() > grid.size());

    SpectrumResult flat;
    flat.omega_S = linspace(0.0, 1.0, 64);
    flat.S.assign(64, 0.0);
    CHECK(extract_lines(flat).empty());
    flat.omega_S = {0.0, 1.0};
    flat.S = {0.0, 0.0};
    CHECK_THROWS_AS(extract_lines(flat), ConfigError);
}
