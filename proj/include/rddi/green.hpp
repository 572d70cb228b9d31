#pragma once
#include <Eigen/Dense>
#include <functional>
#include <optional>
#include "rddi/material.hpp"
#include "rddi/units.hpp"

namespace rddi {

// Classical electromagnetic Green tensor in the normalisation
//   [curl curl - eps(r,omega) omega^2] G(r,r',omega) = delta(r-r') I
// (c = 1).  Positions here are in natural length units (c/omega_T);
// conversion from lambda_T happens at the scenario layer.

enum class GreenKind { vacuum, bulk, sphere_scattering, total };

struct GreenTensor {
    Eigen::Matrix3cd matrix = Eigen::Matrix3cd::Zero();
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    Eigen::Vector3d r_prime = Eigen::Vector3d::Zero();
    double omega = 0.0;
    GreenKind kind = GreenKind::vacuum;
    // Coincident points: the real part diverges and only the (finite)
    // imaginary part is returned; flag tells the caller so.
    bool imaginary_only = false;
};

GreenTensor vacuum_green(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                         double omega);

// Homogeneous absorbing medium: same closed form with k = n(omega) omega.
// Coincident points return the propagating contribution Re(n) omega/(6 pi) I.
GreenTensor bulk_green(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                       double omega, const Material& medium);

struct SphereGeometry {
    double diameter_lambda = 0.0; // sphere diameter, units of lambda_T
    Material material = Material::vacuum();
    double radius() const { return length_from_lambda(0.5 * diameter_lambda); }
};

struct SeriesDiagnostics {
    int l_used = 0;
    double last_rel_term = 0.0;
};

// Scattering part of the Green tensor for a sphere centred at the origin,
// both points outside.  Multipole order grows adaptively until the relative
// tail falls below tol.series_tail (ConvergenceError past tol.l_max_cap).
GreenTensor sphere_scattering_green(const SphereGeometry& geo,
                                    const Eigen::Vector3d& r,
                                    const Eigen::Vector3d& rp, double omega,
                                    const Tolerances& tol = {},
                                    SeriesDiagnostics* diag = nullptr);

// vacuum + sphere scattering (or bulk when no sphere is present)
struct Environment {
    std::optional<SphereGeometry> sphere;   // scatterer in vacuum
    std::optional<Material> bulk;           // or: homogeneous medium
};

GreenTensor total_green(const Environment& env, const Eigen::Vector3d& r,
                        const Eigen::Vector3d& rp, double omega,
                        const Tolerances& tol = {});

// Free-space check: the same multipole series with unit coefficients and a
// regular/outgoing radial split must reproduce the closed form.
Eigen::Matrix3cd vacuum_series_green(const Eigen::Vector3d& r,
                                     const Eigen::Vector3d& rp, double omega,
                                     int lmax);

struct ResonanceInfo {
    double omega_m = 0.0;       // line centre
    double delta_omega_m = 0.0; // half width at half maximum
    double strength = 0.0;      // fitted peak height above baseline
};

// Locate a single resonance of f(omega) inside [lo, hi]: coarse scan,
// parabolic refinement to rel_tol, half-maximum bisection, then a
// Lorentzian-plus-linear-offset least-squares fit over +-6 HWHM.
// Zero or several prominent peaks raise ConvergenceError.
ResonanceInfo find_resonance(const std::function<double(double)>& f, double lo,
                             double hi, double rel_tol = 1e-9, int coarse_n = 60);

} // namespace rddi
