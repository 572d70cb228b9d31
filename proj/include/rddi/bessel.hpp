#pragma once
#include <vector>
#include "rddi/units.hpp"

namespace rddi {

// Floating value with an explicit binary exponent: value = m * 2^e.
// Spherical Hankel functions overflow IEEE doubles near l ~ 300 for the
// arguments used here, while the sphere coefficients underflow at the same
// rate; both are kept in this form and only their products are collapsed.
struct Scaled {
    cplx m{0.0, 0.0};
    long e = 0;
};

Scaled s_normalize(Scaled a);
Scaled s_from(cplx v);
Scaled s_mul(const Scaled& a, const Scaled& b);
Scaled s_div(const Scaled& a, const Scaled& b);
Scaled s_scale(const Scaled& a, cplx c);
Scaled s_add(const Scaled& a, const Scaled& b);
Scaled s_sub(const Scaled& a, const Scaled& b);
cplx s_value(const Scaled& a);      // collapses to double range (0 / inf beyond)
double s_log10_abs(const Scaled& a);

// Riccati-Bessel psi_l(x) = x j_l(x), l = 0..lmax, downward recurrence
// normalised by psi_0 = sin x.
std::vector<Scaled> riccati_psi(double x, int lmax);

// Riccati-Hankel xi_l(x) = x h^(1)_l(x), l = 0..lmax, upward recurrence.
std::vector<Scaled> riccati_xi(double x, int lmax);

// derivative via d/dx [x z_l] = x z_{l-1} - l z_l:
// z'_l (Riccati) = Z_{l-1} - l Z_l / x, Z the Riccati form.
Scaled riccati_deriv(const std::vector<Scaled>& Z, int l, double x);

// logarithmic derivative D_l(y) = psi'_l(y)/psi_l(y), complex argument.
std::vector<cplx> log_deriv_psi(cplx y, int lmax);

// Sphere scattering coefficients for electric (N) and magnetic (M) waves,
// size parameter x = omega a, relative index mrel = n(omega).
// BN_l = -a_l, BM_l = -b_l in Bohren-Huffman notation; index 0 unused.
struct MieCoefficients {
    std::vector<Scaled> BN, BM;
};
MieCoefficients mie_coefficients(double x, cplx mrel, int lmax);

// Legendre / Mie angular functions at cos(gamma):
// P_l, P^1_l, pi_l = P^1_l/sin(gamma), tau_l = d P^1_l/d(gamma); index 0 unused
// for pi/tau.
struct Angular {
    std::vector<double> P, P1, pi, tau;
};
Angular angular_functions(double cosg, int lmax);

} // namespace rddi
