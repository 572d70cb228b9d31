#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <cmath>
#include "rddi/fit.hpp"
#include "rddi/errors.hpp"

using namespace rddi;

TEST_CASE("line fit recovers exact parameters") {
    const double x0 = 1.05, w = 3e-4, A = 812.0, c0 = 1.4, c1 = -20.0;
    std::vector<double> xs, ys;
    for (int i = 0; i < 90; ++i) {
        double x = x0 + w * (-7.0 + 14.0 * i / 89.0);
        double dx = x - x0;
        xs.push_back(x);
        ys.push_back(A * w * w / (dx * dx + w * w) + c0 + c1 * dx);
    }
    LorentzianFit f = fit_lorentzian(xs, ys, x0 + 2 * w, 2.5 * w);
    CHECK(f.x0 == doctest::Approx(x0).epsilon(1e-10));
    CHECK(f.w == doctest::Approx(w).epsilon(1e-7));
    CHECK(f.A == doctest::Approx(A).epsilon(1e-7));
    CHECK(f.c0 == doctest::Approx(c0).epsilon(1e-5));
    CHECK(f.rms < 1e-7 * A);
}

TEST_CASE("parabolic vertex is exact for a parabola") {
    auto p = [](double x) { return 3.0 - 2.0 * (x - 0.37) * (x - 0.37); };
    double v = parabolic_peak(0.1, p(0.1), 0.3, p(0.3), 0.62, p(0.62));
    CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("golden section maximum") {
    auto f = [](double x) { return -std::pow(x - 2.1317, 4); };
    double v = golden_max(f, 0.0, 5.0, 1e-10);
    CHECK(v == doctest::Approx(2.1317).epsilon(1e-4));
}

TEST_CASE("level bisection") {
    auto f = [](double x) { return std::exp(-x); };
    double v = bisect_level(f, 0.0, 10.0, 0.5, 1e-12);
    CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(bisect_level(f, 0.0, 1.0, 2.0, 1e-12), ConvergenceError);
}
