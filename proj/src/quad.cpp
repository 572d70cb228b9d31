#include "rddi/quad.hpp"
#include "rddi/errors.hpp"
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace rddi {

static GaussRule make_rule(int n) {
    // Newton iteration on P_n with the Chebyshev-angle initial guess.
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

template <class T, class F>
static T integrate_impl(const F& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    T acc{};
    for (int i = 0; i < n; ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return acc * half;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
    return integrate_impl<double>(f, a, b, n);
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b, int n) {
    return integrate_impl<cplx>(f, a, b, n);
}

template <class T, class F>
static T panels_impl(const F& f, const std::vector<double>& edges, int n) {
    T acc{};
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        acc += integrate_impl<T>(f, edges[i], edges[i + 1], n);
    return acc;
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& edges, int n) {
    return panels_impl<double>(f, edges, n);
}

cplx integrate_panels_c(const std::function<cplx(double)>& f,
                        const std::vector<double>& edges, int n) {
    return panels_impl<cplx>(f, edges, n);
}

std::vector<double> clustered_edges(double a, double b, double x0, double w0) {
    if (!(a < b)) throw ConfigError("clustered_edges: empty interval");
    std::vector<double> e{a, b};
    if (x0 > a && x0 < b && w0 > 0.0) {
        for (double s = w0; s < (b - a); s *= 2.0) {
            if (x0 - s > a) e.push_back(x0 - s);
            if (x0 + s < b) e.push_back(x0 + s);
        }
        e.push_back(x0);
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

double pv_integral(const std::function<double(double)>& f, double a, double b,
                   double x0, int n) {
    if (!(x0 > a && x0 < b)) throw ConfigError("pv_integral: pole not interior");
    const double h = std::min(x0 - a, b - x0);
    // odd part through the pole: \int_0^h [f(x0+s)-f(x0-s)]/s ds, finite
    auto odd = [&](double s) { return (f(x0 + s) - f(x0 - s)) / s; };
    // resolve the s->0 region where the difference quotient flattens
    std::vector<double> se{0.0, h};
    for (double s = h / 2; s > h * 1e-12; s /= 4) se.push_back(s);
    std::sort(se.begin(), se.end());
    double acc = integrate_panels(odd, se, n);
    if (x0 - a < b - x0)
        acc += integrate([&](double x) { return f(x) / (x - x0); }, x0 + h, b, n);
    else if (b - x0 < x0 - a)
        acc += integrate([&](double x) { return f(x) / (x - x0); }, a, x0 - h, n);
    return acc;
}

double oscillatory_tail(const std::function<double(double)>& f, double a,
                        double period, int levels, int n) {
    // half-period partial sums alternate around the limit; repeated pairwise
    // averaging (Euler transformation) then converges geometrically
    const double h = 0.5 * period;
    const int m = 4 * levels + 12;
    std::vector<double> s(m);
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
        acc += integrate(f, a + k * h, a + (k + 1) * h, n);
        s[k] = acc;
    }
    for (int l = 0; l < levels; ++l)
        for (size_t k = 0; k + 1 < s.size(); ++k) s[k] = 0.5 * (s[k] + s[k + 1]);
    // entries up to m-1-levels are fully averaged; the latest mixes the
    // smallest-amplitude partial sums
    return s[m - 1 - levels];
}

} // namespace rddi
