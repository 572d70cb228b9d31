#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <cmath>
#include <random>
#include "rddi/green.hpp"
#include "rddi/errors.hpp"

using namespace rddi;
using Eigen::Vector3d;

TEST_CASE("free-space tensor: coincidence limit is exactly omega/(6 pi)") {
    for (double w : {0.3, 1.0, 1.05, 2.7}) {
        GreenTensor g = vacuum_green(Vector3d(1, 2, 3), Vector3d(1, 2, 3), w);
        CHECK(g.imaginary_only);
        for (int i = 0; i < 3; ++i) {
            CHECK(g.matrix(i, i).imag() == doctest::Approx(w / (6.0 * pi)).epsilon(1e-14));
            CHECK(g.matrix(i, i).real() == 0.0);
        }
    }
}

TEST_CASE("free-space tensor: reciprocity and transverse far field") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int it = 0; it < 50; ++it) {
        Vector3d r1(u(rng), u(rng), u(rng)), r2(u(rng), u(rng), u(rng));
        if ((r1 - r2).norm() < 0.3) continue;
        double w = 0.5 + 0.05 * it;
        GreenTensor a = vacuum_green(r1, r2, w);
        GreenTensor b = vacuum_green(r2, r1, w);
        CHECK((a.matrix - b.matrix.transpose()).norm() < 1e-12 * a.matrix.norm());
    }
    // far zone: longitudinal/transverse ratio tends to 2/(kR)
    Vector3d rh(0, 0, 1);
    GreenTensor g = vacuum_green(rh * 500.0, Vector3d::Zero(), 1.0);
    double ratio = std::abs(g.matrix(2, 2)) / std::abs(g.matrix(0, 0));
    CHECK(ratio * 500.0 / 2.0 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("free-space near zone scales as 1/R^3 in the real part") {
    Vector3d zh(0, 0, 1);
    double w = 1.0;
    double p1 = std::abs(vacuum_green(zh * 1e-3, Vector3d::Zero(), w).matrix(0, 0).real());
    double p2 = std::abs(vacuum_green(zh * 2e-3, Vector3d::Zero(), w).matrix(0, 0).real());
    double slope = std::log(p2 / p1) / std::log(2.0);
    CHECK(slope == doctest::Approx(-3.0).epsilon(2e-3));
}

TEST_CASE("homogeneous medium: lossless limit rescales wavelength") {
    // eps real > 0 away from resonance with tiny damping
    Material m = Material::drude_lorentz(0.5, 1e-9);
    double w = 0.5; // eps = 1 + .25/.75 = 4/3, n = 2/sqrt(3)
    cplx n = m.refractive_index(w);
    CHECK(n.real() == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-6));
    Vector3d r(3.0, -1.0, 2.0), rp(0.5, 0.5, 0.5);
    GreenTensor gb = bulk_green(r, rp, w, m);
    GreenTensor gv = vacuum_green(r, rp, n.real() * w);
    CHECK((gb.matrix - gv.matrix).norm() < 1e-6 * gv.matrix.norm());
    // coincident: propagating part n Re * w/(6 pi)
    GreenTensor gc = bulk_green(r, r, w, m);
    CHECK(gc.imaginary_only);
    CHECK(gc.matrix(1, 1).imag() ==
          doctest::Approx(n.real() * w / (6.0 * pi)).epsilon(1e-9));
}

TEST_CASE("homogeneous absorbing medium decays exponentially") {
    Material m = Material::drude_lorentz(0.5, 0.3);
    double w = 1.0;
    cplx n = m.refractive_index(w);
    REQUIRE(n.imag() > 1e-3);
    Vector3d zh(0, 0, 1);
    double R1 = 150.0, R2 = 210.0;
    double a1 = std::abs(bulk_green(zh * R1, Vector3d::Zero(), w, m).matrix(0, 0));
    double a2 = std::abs(bulk_green(zh * R2, Vector3d::Zero(), w, m).matrix(0, 0));
    double rate = -std::log((a2 * R2) / (a1 * R1)) / (R2 - R1);
    CHECK(rate == doctest::Approx(n.imag() * w).epsilon(1e-3));
}

TEST_CASE("environment dispatch and exclusivity") {
    Environment both;
    both.sphere = SphereGeometry{1.0, Material::drude_lorentz(0.5, 1e-6)};
    both.bulk = Material::drude_lorentz(0.5, 1e-6);
    CHECK_THROWS_AS(total_green(both, Vector3d(9, 0, 0), Vector3d(0, 9, 0), 1.0),
                    ConfigError);
    Environment vac;
    GreenTensor g = total_green(vac, Vector3d(1, 0, 0), Vector3d(0, 1, 0), 1.0);
    CHECK(g.kind == GreenKind::total);
    GreenTensor gv = vacuum_green(Vector3d(1, 0, 0), Vector3d(0, 1, 0), 1.0);
    CHECK((g.matrix - gv.matrix).norm() == 0.0);
}
