#pragma once
#include <optional>
#include <vector>
#include "rddi/coupling.hpp"
#include "rddi/dynamics.hpp"

namespace rddi {

// Stationary emission spectrum of the initially excited pair, registered by a
// pointlike detector at r.  Stored S carries the figure normalisation
// 64 pi gamma0 / (3 omega_tilde^3); with that factor a single vacuum atom
// peaks at (2/gamma0)^2 * gamma0^2*... i.e. the curves are O(1) for
// order-unity rate enhancements.

// Detector weight of atom A' (detector position in lambda_T units):
//   F_{A'} = w^2 [ Im G(r,r_{A'},w) + (i/pi) P\int_0^inf dw'
//                  Im G(r,r_{A'},w') / (w - w') ] . d_{A'},  w = omega_tilde.
// kk closes the principal value through the Kramers-Kronig relation,
//   F = w^2 [ -i G(r,r_{A'},w) + (i/pi) \int_0^inf Im G(w') / (w' + w) dw' ] . d,
// needing one complex Green evaluation plus a smooth antiresonant integral.
// pv_quadrature keeps the literal principal-value form (real dipoles only,
// vacuum-grade cross-check); delta_only drops the dispersive part entirely.
enum class WeightMode { kk, pv_quadrature, delta_only };

Eigen::Vector3cd emission_weight_F(const Atom& atom,
                                   const Eigen::Vector3d& detector_lambda,
                                   const Environment& env,
                                   WeightMode mode = WeightMode::kk,
                                   const Tolerances& tol = {},
                                   const PVOptions& pv = {});

// Weight of the medium-assisted pair lines when one superposition state
// exchanges the excitation with a narrow mode:
//   W_{A'} = (omega_m^2 delta_omega_m / Omega) Im G(r,r_{A'},omega_m) . d_{A'}
Eigen::Vector3cd emission_weight_W(const Atom& atom,
                                   const Eigen::Vector3d& detector_lambda,
                                   const Environment& env,
                                   const ResonanceInfo& res, double Omega,
                                   const Tolerances& tol = {});

struct EmissionWeights {
    Eigen::Vector3cd F_A = Eigen::Vector3cd::Zero();
    Eigen::Vector3cd F_B = Eigen::Vector3cd::Zero();
    Eigen::Vector3cd W_A = Eigen::Vector3cd::Zero();
    Eigen::Vector3cd W_B = Eigen::Vector3cd::Zero();
    Eigen::Vector3d detector_lambda = Eigen::Vector3d::Zero();
    double omega_tilde = 1.0; // reference for the detuning axis
    double gamma0 = 1e-6;     // figure normalisation scale
};

// Scale mapping raw squared amplitudes onto the plotted spectra:
// 64 pi Gamma0 / (3 omega_tilde^3).
double figure_normalization(const EmissionWeights& w);

// Fills F for both atoms; W additionally when resonance data is supplied and
// the coupling set carries a Rabi frequency for the near-resonant branch.
EmissionWeights make_weights(const AtomPair& pair,
                             const Eigen::Vector3d& detector_lambda,
                             const Environment& env, const CouplingSet& cs,
                             const std::optional<ResonanceInfo>& res = {},
                             WeightMode mode = WeightMode::kk,
                             const Tolerances& tol = {},
                             const PVOptions& pv = {});

enum class LineKind { doublet_plus, doublet_minus, pair, residual };

// width is FWHM; weight = 4 h (width/2)^2 with h the peak height in S units
// (squared modulus of the emitting amplitude combination for an isolated
// line, times the figure normalisation).
struct SpectralLine {
    double position = 0.0; // absolute, units of omega_T
    double width = 0.0;
    double weight = 0.0;
    LineKind kind = LineKind::residual;
};

struct SpectrumResult {
    std::vector<double> omega_S; // absolute, units of omega_T
    std::vector<double> S;       // figure normalisation (see above)
    std::vector<SpectralLine> lines;
    bool truncated = false; // finite observation window cut the decay
};

// Detuned pair (both superposition lines well off any narrow field mode):
// two Lorentzians at omega_tilde -+ delta with widths Gamma_AA +- Gamma_AB
// and amplitudes F_A +- F_B.  Refuses asymmetric sets, and sets where one
// superposition state satisfies the narrow-mode resonance condition.
SpectrumResult weak_spectrum(const CouplingSet& cs, const EmissionWeights& w,
                             const std::vector<double>& omega_S);

// Near-resonant branch split into a pair of medium-assisted lines
// (separation Omega, widths delta_omega_m, amplitudes W_A +- W_B) plus the
// detuned branch surviving as a single line; same classification rules as
// strong_amplitudes.
SpectrumResult strong_spectrum(const CouplingSet& cs, const ResonanceInfo& res,
                               const EmissionWeights& w,
                               const std::vector<double>& omega_S);

// Finite observation window: S = |sum_A' F_A' \int_0^T e^{i dw t} C_A'(t) dt|^2
// on any amplitude trajectory (piecewise-linear amplitudes, oscillatory
// factor integrated exactly per segment).  T past the trajectory end, or
// population left at T, sets the truncated flag.
SpectrumResult finite_time_spectrum(const Trajectory& traj,
                                    const EmissionWeights& w,
                                    const std::vector<double>& omega_S,
                                    double T);

// Equidistant grid centred on omega_tilde spanning
// max(10 Gamma_+, 4|delta|, 4 Omega_+-), at least `points` samples, plus
// refined windows (position +- 8 widths) around any supplied focus lines.
std::vector<double> default_spectrum_grid(
    const CouplingSet& cs, int points = 2001,
    const std::vector<SpectralLine>& focus = {});

// Local maxima above `prominence` * max(S), each fitted by a Lorentzian with
// linear baseline over a window clipped to half the distance to the nearest
// neighbouring peak.  Positions/widths/weights come from the fit.
std::vector<SpectralLine> extract_lines(const SpectrumResult& sr,
                                        double prominence = 1e-3);

} // namespace rddi
