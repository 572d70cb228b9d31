#include "rddi/bessel.hpp"
#include "rddi/errors.hpp"
#include <cmath>

namespace rddi {

Scaled s_normalize(Scaled a) {
    double f = std::max(std::abs(a.m.real()), std::abs(a.m.imag()));
    if (f == 0.0 || !std::isfinite(f)) {
        if (!std::isfinite(f)) throw ConvergenceError("scaled arithmetic overflowed");
        return {cplx(0.0, 0.0), 0};
    }
    int k = 0;
    std::frexp(f, &k);
    a.m = cplx(std::ldexp(a.m.real(), -k), std::ldexp(a.m.imag(), -k));
    a.e += k;
    return a;
}

Scaled s_from(cplx v) { return s_normalize({v, 0}); }

Scaled s_mul(const Scaled& a, const Scaled& b) {
    return s_normalize({a.m * b.m, a.e + b.e});
}

Scaled s_div(const Scaled& a, const Scaled& b) {
    return s_normalize({a.m / b.m, a.e - b.e});
}

Scaled s_scale(const Scaled& a, cplx c) { return s_normalize({a.m * c, a.e}); }

Scaled s_add(const Scaled& a, const Scaled& b) {
    if (a.m == cplx(0.0, 0.0)) return b;
    if (b.m == cplx(0.0, 0.0)) return a;
    const Scaled &hi = (a.e >= b.e) ? a : b, &lo = (a.e >= b.e) ? b : a;
    long d = hi.e - lo.e;
    if (d > 1080) return hi;
    cplx lom(std::ldexp(lo.m.real(), int(-d)), std::ldexp(lo.m.imag(), int(-d)));
    return s_normalize({hi.m + lom, hi.e});
}

Scaled s_sub(const Scaled& a, const Scaled& b) { return s_add(a, s_scale(b, -1.0)); }

cplx s_value(const Scaled& a) {
    if (a.e > 1020) throw ConvergenceError("scaled value exceeds double range");
    if (a.e < -1060) return {0.0, 0.0};
    return cplx(std::ldexp(a.m.real(), int(a.e)), std::ldexp(a.m.imag(), int(a.e)));
}

double s_log10_abs(const Scaled& a) {
    if (a.m == cplx(0.0, 0.0)) return -1e300;
    return std::log10(std::abs(a.m)) + double(a.e) * 0.30102999566398120;
}

std::vector<Scaled> riccati_psi(double x, int lmax) {
    if (!(x > 0.0)) throw ConfigError("riccati_psi: x must be positive");
    const int pad = 40 + int(x);
    const int L = lmax + pad;
    std::vector<Scaled> out(lmax + 1);
    Scaled p1 = s_from(cplx(1e-280, 0.0)); // psi_{L+1} (arbitrary seed)
    Scaled p0 = s_from(cplx(1e-280 * (2 * L + 3) / x, 0.0));
    for (int l = L; l >= 1; --l) {
        // psi_{l-1} = (2l+1)/x psi_l - psi_{l+1}
        Scaled pm = s_sub(s_scale(p0, (2.0 * l + 1.0) / x), p1);
        if (l - 1 <= lmax) out[l - 1] = pm;
        if (l <= lmax) out[l] = p0;
        p1 = p0;
        p0 = pm;
    }
    // Normalise via the cross product with the (stable, closed-form) second
    // solution: psi_0 chi_1 - psi_1 chi_0 = 1.  Normalising by sin x alone
    // fails catastrophically when x sits near a multiple of pi.
    const double chi0 = std::cos(x);
    const double chi1 = std::cos(x) / x + std::sin(x);
    Scaled w = s_sub(s_scale(p0, chi1), s_scale(p1, chi0));
    Scaled norm = s_div(s_from(cplx(1.0, 0.0)), w);
    for (auto& s : out) s = s_mul(s, norm);
    return out;
}

std::vector<Scaled> riccati_xi(double x, int lmax) {
    if (!(x > 0.0)) throw ConfigError("riccati_xi: x must be positive");
    std::vector<Scaled> out(lmax + 1);
    const cplx eix = std::exp(I * x);
    out[0] = s_from(-I * eix);
    if (lmax >= 1) out[1] = s_from(-eix * (1.0 + I / x));
    for (int l = 1; l < lmax; ++l)
        out[l + 1] = s_sub(s_scale(out[l], (2.0 * l + 1.0) / x), out[l - 1]);
    return out;
}

Scaled riccati_deriv(const std::vector<Scaled>& Z, int l, double x) {
    return s_sub(Z[l - 1], s_scale(Z[l], double(l) / x));
}

std::vector<cplx> log_deriv_psi(cplx y, int lmax) {
    if (!(std::abs(y) > 0.0) || !std::isfinite(std::abs(y)))
        throw ConfigError("log_deriv_psi: argument must be finite and nonzero");
    const int start = lmax + 18 + int(4.0 * std::sqrt(std::abs(y)));
    std::vector<cplx> D(start + 1, cplx(0.0, 0.0));
    for (int n = start; n >= 1; --n)
        D[n - 1] = double(n) / y - 1.0 / (D[n] + double(n) / y);
    D.resize(lmax + 1);
    return D;
}

MieCoefficients mie_coefficients(double x, cplx mrel, int lmax) {
    auto psi = riccati_psi(x, lmax);
    auto xi = riccati_xi(x, lmax);
    auto D = log_deriv_psi(mrel * x, lmax);
    MieCoefficients c;
    c.BN.assign(lmax + 1, Scaled{});
    c.BM.assign(lmax + 1, Scaled{});
    for (int l = 1; l <= lmax; ++l) {
        cplx Da = D[l] / mrel + double(l) / x;
        cplx Db = D[l] * mrel + double(l) / x;
        Scaled al = s_div(s_sub(s_scale(psi[l], Da), psi[l - 1]),
                          s_sub(s_scale(xi[l], Da), xi[l - 1]));
        Scaled bl = s_div(s_sub(s_scale(psi[l], Db), psi[l - 1]),
                          s_sub(s_scale(xi[l], Db), xi[l - 1]));
        c.BN[l] = s_scale(al, -1.0);
        c.BM[l] = s_scale(bl, -1.0);
    }
    return c;
}

Angular angular_functions(double cosg, int lmax) {
    Angular a;
    a.P.assign(lmax + 1, 0.0);
    a.P1.assign(lmax + 1, 0.0);
    a.pi.assign(lmax + 1, 0.0);
    a.tau.assign(lmax + 1, 0.0);
    const double sing = std::sqrt(std::max(0.0, 1.0 - cosg * cosg));
    a.P[0] = 1.0;
    if (lmax >= 1) {
        a.P[1] = cosg;
        a.pi[1] = 1.0;
        a.tau[1] = cosg;
    }
    for (int n = 2; n <= lmax; ++n) {
        a.P[n] = ((2 * n - 1) * cosg * a.P[n - 1] - (n - 1) * a.P[n - 2]) / n;
        a.pi[n] = ((2.0 * n - 1) / (n - 1)) * cosg * a.pi[n - 1] -
                  (double(n) / (n - 1)) * a.pi[n - 2];
        a.tau[n] = n * cosg * a.pi[n] - (n + 1) * a.pi[n - 1];
    }
    for (int n = 1; n <= lmax; ++n) a.P1[n] = a.pi[n] * sing;
    return a;
}

} // namespace rddi
