#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <cmath>
#include "rddi/quad.hpp"
#include "rddi/errors.hpp"

using namespace rddi;

TEST_CASE("gauss nodes reproduce known low orders") {
    const auto& r2 = gauss_legendre(2);
    CHECK(r2.x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.w[0] == doctest::Approx(1.0).epsilon(1e-14));
    const auto& r5 = gauss_legendre(5);
    CHECK(r5.x[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r5.w[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));
}

TEST_CASE("polynomials integrate exactly, oscillations converge") {
    auto f = [](double x) { return 5 * x * x * x * x - 2 * x + 1; };
    CHECK(integrate(f, -1.0, 2.0, 8) == doctest::Approx(33.0 + 3.0 - 3.0).epsilon(1e-13));
    // \int_{-1}^{2} (5x^4 - 2x + 1) dx = [x^5 - x^2 + x] = (32-4+2) - (-1-1-1) = 33
    CHECK(integrate(f, -1.0, 2.0, 8) == doctest::Approx(33.0).epsilon(1e-13));
    double s = integrate([](double x) { return std::sin(x); }, 0.0, pi, 48);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
    cplx e = integrate_c([](double x) { return std::exp(I * x); }, 0.0, pi / 2, 32);
    CHECK(e.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.imag() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("panel integration splits cleanly") {
    auto f = [](double x) { return 1.0 / (1.0 + x * x); };
    double v = integrate_panels(f, {0.0, 0.5, 1.0, 4.0, 10.0}, 32);
    CHECK(v == doctest::Approx(std::atan(10.0)).epsilon(1e-12));
}

TEST_CASE("clustered edges resolve a narrow feature") {
    auto e = clustered_edges(0.0, 2.0, 1.0, 1e-6);
    CHECK(e.front() == 0.0);
    CHECK(e.back() == 2.0);
    // narrow Lorentzian integrates to pi w to high accuracy with the panels
    const double w = 1e-6;
    auto f = [&](double x) { return w * w / ((x - 1.0) * (x - 1.0) + w * w); };
    CHECK(integrate_panels(f, e, 32) == doctest::Approx(pi * w).epsilon(1e-8));
}

TEST_CASE("principal value integrals") {
    // P int_0^2 x/(x-1) dx = 2
    auto f = [](double x) { return x; };
    CHECK(pv_integral(f, 0.0, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    // P int_{-1}^{3} 1/(x-1) dx = log(2/2)+log(...)  -> log((3-1)/(1-(-1))) = 0
    auto one = [](double) { return 1.0; };
    CHECK(pv_integral(one, -1.0, 3.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    // asymmetric window: P int_0^3 1/(x-1) = log(2/1) = log 2
    CHECK(pv_integral(one, 0.0, 3.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(pv_integral(one, 0.0, 1.0, 2.0), ConfigError);
}

TEST_CASE("oscillatory tail accelerates sin(x)/x") {
    // int_1^inf sin x / x dx = pi/2 - Si(1) = 0.62471325...
    auto f = [](double x) { return std::sin(x) / x; };
    double v = oscillatory_tail(f, 1.0, two_pi, 6, 48);
    CHECK(v == doctest::Approx(0.6247132564).epsilon(1e-8));
}
