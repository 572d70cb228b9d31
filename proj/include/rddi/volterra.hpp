#pragma once
#include <vector>
#include <Eigen/Dense>
#include "rddi/coupling.hpp"
#include "rddi/dynamics.hpp"

namespace rddi {

// Nonperturbative oracle for the coupled amplitude equations
//
//   Cdot(t) = M C(t) + \int_0^t kappa(t - s) C(s) ds,
//
// the rotating-frame memory kernel being the Fourier transform of the
// spectral rates seen by the pair,
//
//   kappa_ij(tau) = -(1/2pi) \int dw Gamma_ij(w) e^{-i (w - wt) tau},
//
// with wt the frame reference (coupling.omega_ref).  Only symmetric pairs
// are handled: Gamma_BB = Gamma_AA and Gamma_BA = Gamma_AB.

// one Lorentzian spectral line Gamma(w) = gamma_peak * hw^2 / ((w-w_m)^2 + hw^2);
// its kernel is a single decaying complex exponential, used exactly.
struct LorentzianLine {
    double omega_m = 0.0;
    double half_width = 0.0;
    double gamma_peak = 0.0;
};

struct KernelSpec {
    // analytic content, exact kernels
    std::vector<LorentzianLine> lines_AA;
    std::vector<LorentzianLine> lines_AB;

    // tabulated rates on a frequency grid (piecewise linear), transformed by
    // Gauss-Legendre panels; panels are clustered around (cluster_omega,
    // cluster_width) when set and subdivided until they resolve the memory
    // depth actually used by the solver
    std::vector<double> omega;
    std::vector<double> gamma_AA;
    std::vector<double> gamma_AB;
    double cluster_omega = 0.0;
    double cluster_width = 0.0;

    // flat diagonal pedestal over [wt - flat_window, wt + flat_window]
    double gamma_flat = 0.0;
    double flat_window = 0.0;

    // Markovian remainder for spectral content outside the represented window
    Eigen::Matrix2cd markov = Eigen::Matrix2cd::Zero();

    // drop memory contributions older than this delay (0 = keep everything;
    // analytic lines additionally truncate themselves once fully decayed)
    double memory_cut = 0.0;
};

// kernel matrix [[AA, AB], [AB, AA]] at a single delay
Eigen::Matrix2cd kernel_at(const KernelSpec& spec, double omega_tilde, double tau);

// \int_0^inf kappa(tau) dtau + markov = -Gamma(wt)/2 + i * (principal-value
// shift), evaluated per entry; the Markov limit of the memory integral
Eigen::Matrix2cd kernel_markov_limit(const KernelSpec& spec, double omega_tilde);

// Implicit product-integration trapezoid, globally second order.  dt must
// resolve the fastest kernel oscillation and the exchange frequencies in
// `coupling` (when set); violations raise ConvergenceError with the offending
// scales in the message.  Arbitrary initial conditions are supported here
// only; times in the returned trajectory are in natural units.
Trajectory volterra_solve(const KernelSpec& spec, const CouplingSet& coupling,
                          double t_max, double dt,
                          Eigen::Vector2cd C0 = Eigen::Vector2cd(1.0, 0.0));

} // namespace rddi
