#pragma once
#include <optional>
#include "rddi/green.hpp"

namespace rddi {

// Two-level atom: position quoted in lambda_T, unit dipole direction (may be
// complex for circular transitions), vacuum decay rate gamma0 and shifted
// transition frequency omega_tilde (both in omega_T units).  The bare
// frequency omega is kept so the environment-induced shift can be applied as
// a separate, explicit step.
struct Atom {
    Eigen::Vector3d position_lambda = Eigen::Vector3d::Zero();
    Eigen::Vector3cd dipole = Eigen::Vector3cd::UnitZ();
    double gamma0 = 1e-6;
    double omega = 1.0;
    double omega_tilde = 1.0;

    Eigen::Vector3d position() const { return position_lambda * two_pi; }
    double dipole_moment() const {
        return std::sqrt(dipole_sq(gamma0, omega_tilde));
    }
    void validate() const;
};

struct AtomPair {
    Atom A, B;
    void validate() const;
};

// K_{A*B} = -Gamma_AB/2 + i delta_AB = i w^2 |dA||dB| (dA* . G(rA,rB,w) . dB),
// evaluated at the source atom's shifted frequency w = omega_tilde of B.
cplx k_coefficient(const Atom& a, const Atom& b, const Environment& env,
                   const Tolerances& tol = {});

// dipole-dipole shift w^2 |dA||dB| dA*.(Re G).dB and rate coefficient
// 2 w^2 |dA||dB| dA*.(Im G).dB; both real for real dipole directions, and
// K = -gamma/2 + i delta holds exactly in all cases
cplx delta_coupling(const Atom& a, const Atom& b, const Environment& env,
                    const Tolerances& tol = {});
cplx gamma_coupling(const Atom& a, const Atom& b, const Environment& env,
                    const Tolerances& tol = {});

// Environment-induced self shift from the scattering part alone (the free
// space contribution is absorbed in the bare frequency).  One fixed-point
// pass: evaluated at omega, then re-evaluated at omega - shift; throws when
// the two disagree wildly (shift function varying on the shift scale).
// Environments with no scatterer give exactly zero.
double frequency_shift(const Atom& a, const Environment& env,
                       const Tolerances& tol = {});

enum class Regime { weak, strong, intermediate };

struct CouplingSet {
    double omega_ref = 0.0;    // frequency the couplings were evaluated at
    Eigen::Matrix2cd gamma;    // {AA, AB; BA, BB}
    cplx delta_AB, delta_BA;   // real for real dipole orientations
    cplx K_AB, K_BA;
    bool symmetric = false;    // delta insensitive to which omega_tilde is used
    Regime regime = Regime::weak;
    // populated when a field resonance backs the dynamics
    double Omega_plus = 0.0, Omega_minus = 0.0;
    double omega_m = 0.0, delta_omega_m = 0.0;
};

// Assembles rates, shifts and K coefficients; when resonance data is given,
// also the pair Rabi frequencies Omega_+- = sqrt(2 Gamma_+- dw_m) and the
// regime classification (strong: Omega_+ > 10 dw_m; weak: < dw_m/3).
CouplingSet build_coupling_set(const AtomPair& pair, const Environment& env,
                               const std::optional<ResonanceInfo>& res = {},
                               const Tolerances& tol = {});

// |delta(omega_tilde_A) - delta(omega_tilde_B)| / max(|..|) below the
// threshold marks the pair as symmetric; the closed-form two-atom solutions
// are only trustworthy when this holds.
struct SymmetryCheck {
    bool symmetric = false;
    double relative_difference = 0.0;
    explicit operator bool() const { return symmetric; }
};
SymmetryCheck check_symmetry_condition(const AtomPair& pair,
                                       const Environment& env,
                                       double threshold = 1e-3,
                                       const Tolerances& tol = {});

// Independent route to delta_AB: the principal-value frequency integral over
// the imaginary part (resonant + antiresonant denominators), with
// Euler-accelerated oscillatory tails.  Real dipole orientations only.
struct PVOptions {
    double omega_min = 1e-3;
    double omega_cut = 30.0;
    int nodes = 48;
};
double pv_coupling_oracle(const Atom& a, const Atom& b, const Environment& env,
                          const Tolerances& tol = {}, const PVOptions& opt = {});

// Asymptotic closed forms of the shift between atoms embedded in an
// absorbing bulk medium.
enum class BulkRange { near, far };
double bulk_limit_delta(const AtomPair& pair, const Material& medium,
                        BulkRange range);

} // namespace rddi
