#pragma once
#include <complex>
#include <numbers>

// Natural unit system used throughout: hbar = eps0 = c = 1 and the medium
// resonance frequency omega_T = 1.  Lengths are then measured in c/omega_T,
// so the transition wavelength lambda_T corresponds to 2*pi length units.
// Public interfaces quote positions in lambda_T and times in 1/Gamma0;
// conversion happens at the API boundary, never inside the numerics.

namespace rddi {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

// lambda_T units -> natural length units
inline constexpr double length_from_lambda(double r_lambda) { return two_pi * r_lambda; }
inline constexpr double lambda_from_length(double r_nat) { return r_nat / two_pi; }

// |d|^2 for a transition of decay rate gamma0 at frequency omega:
// gamma0 = omega^3 |d|^2 / (3 pi)
inline constexpr double dipole_sq(double gamma0, double omega) {
    return 3.0 * pi * gamma0 / (omega * omega * omega);
}

struct Tolerances {
    double series_tail = 1e-10;  // relative tail bound for multipole sums
    int l_max_cap = 8000;        // hard cap on multipole order
    int quad_base_nodes = 48;    // Gauss-Legendre nodes per panel
    double resonance_rel = 1e-9; // relative tolerance of resonance location
    double volterra_dt = 0.02;   // base step, units of fastest timescale
    int spectrum_grid = 2000;    // minimum spectral grid size
};

inline Tolerances tolerance_profile_fast() {
    Tolerances t;
    t.series_tail = 1e-8;
    t.l_max_cap = 4000;
    t.quad_base_nodes = 32;
    t.resonance_rel = 1e-8;
    t.volterra_dt = 0.05;
    return t;
}

inline Tolerances tolerance_profile_paper() { return Tolerances{}; }

} // namespace rddi
