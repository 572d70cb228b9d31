#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <cmath>
#include <random>
#include "rddi/coupling.hpp"
#include "rddi/errors.hpp"

using namespace rddi;
using Eigen::Vector3d;
using Eigen::Vector3cd;

namespace {

Material fig_material() { return Material::drude_lorentz(0.5, 1e-6); }

Environment fig_sphere_env() {
    Environment env;
    env.sphere = SphereGeometry{20.0, fig_material()};
    return env;
}

// both atoms at the Fig-1 stand-off radius, separated by a small chord,
// dipoles radial
AtomPair surface_pair(double chord_lambda, double omega_tilde) {
    const double r_at = 10.02;
    const double th = 2.0 * std::asin(chord_lambda / (2.0 * r_at));
    AtomPair p;
    p.B.position_lambda = Vector3d(0, 0, r_at);
    p.B.dipole = Vector3cd::UnitZ();
    p.A.position_lambda = r_at * Vector3d(std::sin(th), 0, std::cos(th));
    p.A.dipole = Vector3d(std::sin(th), 0, std::cos(th)).cast<cplx>();
    p.A.gamma0 = p.B.gamma0 = 1e-6;
    p.A.omega = p.B.omega = omega_tilde;
    p.A.omega_tilde = p.B.omega_tilde = omega_tilde;
    return p;
}

} // namespace

TEST_CASE("atom validation") {
    Atom a;
    CHECK_NOTHROW(a.validate());
    a.dipole = Vector3cd(0.5, 0, 0);
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = Atom{};
    a.gamma0 = 0.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = Atom{};
    a.omega_tilde = -1.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    // circular dipole is a legal unit direction
    a = Atom{};
    a.dipole = Vector3cd(1.0 / std::sqrt(2.0), cplx(0, 1.0 / std::sqrt(2.0)), 0);
    CHECK_NOTHROW(a.validate());
}

TEST_CASE("free space: self rate is exactly gamma0, self shift zero") {
    Environment vac;
    for (double g0 : {1e-6, 2.5e-3}) {
        for (double wt : {0.7, 1.0, 1.3}) {
            Atom a;
            a.position_lambda = Vector3d(0.3, -1.2, 4.0);
            a.gamma0 = g0;
            a.omega = wt;
            a.omega_tilde = wt;
            CHECK(gamma_coupling(a, a, vac).real() ==
                  doctest::Approx(g0).epsilon(1e-12));
            CHECK(delta_coupling(a, a, vac) == cplx(0.0));
            CHECK(frequency_shift(a, vac) == 0.0);
        }
    }
    // the normalization holds for circular dipoles too
    Atom c;
    c.dipole = Vector3cd(1.0 / std::sqrt(2.0), cplx(0, 1.0 / std::sqrt(2.0)), 0);
    c.gamma0 = 3e-4;
    CHECK(gamma_coupling(c, c, Environment{}).real() ==
          doctest::Approx(3e-4).epsilon(1e-12));
    CHECK(std::abs(gamma_coupling(c, c, Environment{}).imag()) < 1e-18);
}

TEST_CASE("free space pair: K agrees with the closed-form dyadic") {
    Environment vac;
    Atom a, b;
    a.position_lambda = Vector3d(0, 0, 0.4);
    b.position_lambda = Vector3d(0.1, -0.2, 0);
    a.dipole = Vector3d(0, 0, 1).cast<cplx>();
    b.dipole = Vector3d(1, 1, 1).normalized().cast<cplx>();
    a.gamma0 = 1e-6;
    b.gamma0 = 4e-6;
    a.omega_tilde = b.omega_tilde = 1.1;
    const cplx K = k_coefficient(a, b, vac);
    GreenTensor g = vacuum_green(a.position(), b.position(), 1.1);
    const cplx proj = (a.dipole.adjoint() * g.matrix * b.dipole)(0, 0);
    const cplx want = I * 1.1 * 1.1 * a.dipole_moment() * b.dipole_moment() * proj;
    CHECK(std::abs(K - want) <= 1e-14 * std::abs(want));
    CHECK(delta_coupling(a, b, vac).real() ==
          doctest::Approx(K.imag()).epsilon(1e-12));
    CHECK(gamma_coupling(a, b, vac).real() ==
          doctest::Approx(-2 * K.real()).epsilon(1e-12));
    // reciprocity for real dipoles: K_AB(w) = K_BA(w) when rates match
    Atom b2 = b;
    b2.gamma0 = a.gamma0;
    CHECK(std::abs(k_coefficient(a, b2, vac) - k_coefficient(b2, a, vac)) <=
          1e-12 * std::abs(K));
    // the composition K = -gamma/2 + i delta holds exactly for circular
    // dipoles as well
    Atom c = a;
    c.dipole = Vector3cd(1.0 / std::sqrt(2.0), cplx(0, 1.0 / std::sqrt(2.0)), 0);
    const cplx comp = -0.5 * gamma_coupling(c, b, vac) +
                      I * delta_coupling(c, b, vac);
    CHECK(std::abs(comp - k_coefficient(c, b, vac)) <=
          1e-14 * std::abs(comp));
}

TEST_CASE("absorbing bulk: local rate carries Re n, self shift is undefined") {
    Environment env;
    env.bulk = fig_material();
    Atom a;
    a.position_lambda = Vector3d(1, 2, 3);
    a.gamma0 = 1e-6;
    a.omega = a.omega_tilde = 0.8;
    const double ren = env.bulk->refractive_index(0.8).real();
    CHECK(gamma_coupling(a, a, env).real() ==
          doctest::Approx(1e-6 * ren).epsilon(1e-10));
    CHECK_THROWS_AS(frequency_shift(a, env), ConfigError);
}

TEST_CASE("sphere: self shift equals the scattering part of the self K") {
    Environment env;
    env.sphere = SphereGeometry{0.5, Material::drude_lorentz(0.5, 0.2)};
    Atom a;
    a.position_lambda = Vector3d(0, 0.1, 0.4);
    a.dipole = Vector3d(1, 0, 1).normalized().cast<cplx>();
    a.gamma0 = 1e-6;
    a.omega = a.omega_tilde = 0.9;
    const double ds = frequency_shift(a, env);
    CHECK(ds != 0.0);
    // the fixed-point re-evaluation only moves the shift by O(shift^2)
    CHECK(delta_coupling(a, a, env).real() == doctest::Approx(ds).epsilon(1e-4));
}

TEST_CASE("sphere far away: self shift negligible against gamma0") {
    Environment env = fig_sphere_env();
    Atom a;
    a.position_lambda = Vector3d(0, 0, 1000.0);
    a.gamma0 = 1e-6;
    a.omega = a.omega_tilde = 1.05;
    CHECK(std::abs(frequency_shift(a, env)) < 1e-3 * a.gamma0);
}

TEST_CASE("surface-mode resonance: enhanced rates of the diametric pair") {
    // lab-parallel radial dipoles through the sphere center, on resonance
    const double wm = 1.050486699;
    Environment env = fig_sphere_env();
    AtomPair p;
    p.A.position_lambda = Vector3d(0, 0, 10.02);
    p.B.position_lambda = Vector3d(0, 0, -10.02);
    p.A.gamma0 = p.B.gamma0 = 1e-6;
    p.A.omega = p.B.omega = wm;
    p.A.omega_tilde = p.B.omega_tilde = wm;

    const double gaa = gamma_coupling(p.A, p.A, env).real();
    const double gab = gamma_coupling(p.A, p.B, env).real();
    CHECK(gaa / 1e-6 == doctest::Approx(8372.03).epsilon(5e-4));
    CHECK(gab / 1e-6 == doctest::Approx(8371.5).epsilon(5e-4));

    ResonanceInfo res;
    res.omega_m = wm;
    res.delta_omega_m = 4.890866e-7;
    res.strength = 8371.0;
    CouplingSet cs = build_coupling_set(p, env, res);
    CHECK(cs.symmetric);
    CHECK(cs.regime == Regime::strong);
    CHECK(cs.Omega_plus / 1e-6 == doctest::Approx(127.98).epsilon(2e-3));
    CHECK(cs.Omega_minus / 1e-6 == doctest::Approx(0.72).epsilon(0.2));
    CHECK(std::abs(cs.gamma(0, 1) - cs.gamma(1, 0)) <= 1e-9 * std::abs(cs.gamma(0, 1)));
}

TEST_CASE("near-surface pair: shift anchors for the close Fig-2 geometry") {
    // chord 0.01 lambda at stand-off 10.02 lambda, radial dipoles
    AtomPair p = surface_pair(0.01, 1.04835747);
    Environment vac;
    const double g0 = 1e-6;
    // free-space part is closed-form
    CHECK(delta_coupling(p.A, p.B, vac).real() / g0 ==
          doctest::Approx(-2618.5053).epsilon(1e-6));
    // with the sphere the multipole sum must reproduce the deep series tail
    Tolerances tol;
    tol.series_tail = 1e-9;
    tol.l_max_cap = 20000;
    Environment env = fig_sphere_env();
    const double dtot = delta_coupling(p.A, p.B, env, tol).real() / g0;
    CHECK(dtot == doctest::Approx(-2273.854).epsilon(5e-5));
    CHECK(dtot - delta_coupling(p.A, p.B, vac).real() / g0 ==
          doctest::Approx(344.6515).epsilon(5e-4));
}

TEST_CASE("principal-value route reproduces the direct shift") {
    Tolerances tol;
    Environment vac;
    Atom a, b;
    a.position_lambda = Vector3d(0, 0, 0.3);
    b.position_lambda = Vector3d(0.05, 0, 0);
    a.dipole = Vector3d(0, 0, 1).cast<cplx>();
    b.dipole = Vector3d(1, 0, 1).normalized().cast<cplx>();
    a.gamma0 = b.gamma0 = 1e-6;
    a.omega_tilde = b.omega_tilde = 1.0;
    a.omega = b.omega = 1.0;
    const double direct_vac = delta_coupling(a, b, vac, tol).real();
    const double pv_vac = pv_coupling_oracle(a, b, vac, tol);
    CHECK(pv_vac == doctest::Approx(direct_vac).epsilon(1e-2));

    // lossy small sphere keeps every frequency feature wide enough to resolve
    Environment env;
    env.sphere = SphereGeometry{0.5, Material::drude_lorentz(0.5, 0.2)};
    Atom a2 = a, b2 = b;
    a2.position_lambda = Vector3d(0, 0, 0.45);
    b2.position_lambda = Vector3d(0.1, 0, 0.33);
    b2.omega_tilde = b2.omega = 0.9;
    a2.omega_tilde = a2.omega = 0.9;
    const double direct_sc = delta_coupling(a2, b2, env, tol).real();
    const double pv_sc = pv_coupling_oracle(a2, b2, env, tol);
    CHECK(pv_sc == doctest::Approx(direct_sc).epsilon(1e-2));

    Atom c = a;
    c.dipole = Vector3cd(1.0 / std::sqrt(2.0), cplx(0, 1.0 / std::sqrt(2.0)), 0);
    CHECK_THROWS_AS(pv_coupling_oracle(c, b, vac, tol), ConfigError);
}

TEST_CASE("bulk medium: closed-form limits bracket the full expression") {
    Material med = fig_material();
    AtomPair p;
    p.A.gamma0 = p.B.gamma0 = 1e-6;
    p.A.omega = p.B.omega = 0.9;
    p.A.omega_tilde = p.B.omega_tilde = 0.9;
    p.A.dipole = Vector3d(0, 0, 1).cast<cplx>();
    p.B.dipole = Vector3d(1, 0, 0).cast<cplx>();
    Environment env;
    env.bulk = med;

    // near zone: quasistatic screening by Re(1/eps)
    p.A.position_lambda = Vector3d(0, 0, 0);
    p.B.position_lambda = Vector3d(0.0004, 0, 0.0008);
    CHECK(bulk_limit_delta(p, med, BulkRange::near) ==
          doctest::Approx(delta_coupling(p.A, p.B, env).real()).epsilon(1e-3));

    // radiation zone: transverse projector with the medium phase
    p.B.position_lambda = Vector3d(120, 0, 240);
    CHECK(bulk_limit_delta(p, med, BulkRange::far) ==
          doctest::Approx(delta_coupling(p.A, p.B, env).real()).epsilon(3e-3));

    AtomPair bad = p;
    bad.B.position_lambda = bad.A.position_lambda;
    CHECK_THROWS_AS(bulk_limit_delta(bad, med, BulkRange::near), GeometryError);
}

TEST_CASE("symmetry condition: shift insensitive to the evaluation frequency") {
    Environment vac;
    AtomPair p;
    p.A.position_lambda = Vector3d(0, 0, 0.01);
    p.B.position_lambda = Vector3d(0, 0, -0.01);
    p.A.gamma0 = p.B.gamma0 = 1e-6;
    SymmetryCheck same = check_symmetry_condition(p, vac);
    CHECK(same.symmetric);
    CHECK(same.relative_difference == 0.0);
    // unequal decay rates alone do not break the condition
    AtomPair q = p;
    q.B.gamma0 = 2e-6;
    CHECK(check_symmetry_condition(q, vac));
    // a 1% detuning in the smooth vacuum near zone stays symmetric
    AtomPair r = p;
    r.B.omega_tilde = r.B.omega = 1.01;
    CHECK(check_symmetry_condition(r, vac));

    // detuning across the sharp sphere feature does break it
    Environment env = fig_sphere_env();
    const double wm = 1.050486699, dwm = 4.890866e-7;
    AtomPair s;
    s.A.position_lambda = Vector3d(0, 0, 10.02);
    s.B.position_lambda = Vector3d(0, 0, -10.02);
    s.A.gamma0 = s.B.gamma0 = 1e-6;
    s.A.omega = s.A.omega_tilde = wm;
    s.B.omega = s.B.omega_tilde = wm + 20.0 * dwm;
    SymmetryCheck split = check_symmetry_condition(s, env);
    CHECK_FALSE(split.symmetric);
    CHECK(split.relative_difference > 0.1);
}

TEST_CASE("rate matrix stays positive over random configurations") {
    std::mt19937 rng(20260815);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto unit = [&] {
        Eigen::Vector3d v;
        do
            v = Eigen::Vector3d(u(rng), u(rng), u(rng));
        while (v.norm() < 0.1);
        return v.normalized();
    };
    Environment sph;
    sph.sphere = SphereGeometry{0.5, Material::drude_lorentz(0.5, 0.2)};
    for (int n = 0; n < 24; ++n) {
        Environment env = (n % 2) ? sph : Environment{};
        AtomPair p;
        p.A.position_lambda = (0.30 + 0.25 * std::abs(u(rng))) * unit();
        p.B.position_lambda = (0.30 + 0.25 * std::abs(u(rng))) * unit();
        p.A.dipole = unit().cast<cplx>();
        p.B.dipole = unit().cast<cplx>();
        p.A.gamma0 = 1e-6 * (1.0 + std::abs(u(rng)));
        p.B.gamma0 = 1e-6 * (1.0 + std::abs(u(rng)));
        p.A.omega = p.A.omega_tilde = 0.9 + 0.2 * std::abs(u(rng));
        p.B.omega = p.B.omega_tilde = p.A.omega_tilde;
        CouplingSet cs = build_coupling_set(p, env);
        const double gaa = cs.gamma(0, 0).real(), gbb = cs.gamma(1, 1).real();
        CHECK(gaa > 0.0);
        CHECK(gbb > 0.0);
        CHECK(std::abs(cs.gamma(0, 1)) <=
              std::sqrt(gaa * gbb) * (1.0 + 1e-6));
        CHECK(std::abs(cs.K_AB - cs.K_BA) <= 1e-9 * std::abs(cs.K_AB));
        CHECK(cs.symmetric);
    }
}
