#pragma once
#include <functional>
#include <vector>
#include "rddi/units.hpp"

namespace rddi {

// Gauss-Legendre rule on [-1,1]; nodes ascending.
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss_legendre(int n);

// Integrate f over [a,b] with an n-point rule.
double integrate(const std::function<double(double)>& f, double a, double b, int n = 48);
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b, int n = 48);

// Composite integration over explicit panel edges.
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& edges, int n = 48);
cplx integrate_panels_c(const std::function<cplx(double)>& f,
                        const std::vector<double>& edges, int n = 48);

// Panel edges over [a,b] geometrically refined toward a feature at x0 with
// scale w0 (edges land at x0 +- w0 * 2^k).  Used to resolve narrow
// resonances inside wide frequency integrals.
std::vector<double> clustered_edges(double a, double b, double x0, double w0);

// Principal value of \int_a^b f(x)/(x-x0) dx, x0 strictly inside (a,b).
// Symmetric subtraction around the pole: the singular part integrates
// [f(x0+s)-f(x0-s)]/s over s in (0,h], the rest is regular.
double pv_integral(const std::function<double(double)>& f, double a, double b,
                   double x0, int n = 48);

// \int_a^inf f, where f decays by oscillation cancellation rather than
// magnitude: average of consecutive partial sums over a window of length
// `period`, iterated `levels` times (Euler-style acceleration).
double oscillatory_tail(const std::function<double(double)>& f, double a,
                        double period, int levels = 6, int n = 48);

} // namespace rddi
