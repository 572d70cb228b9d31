#pragma once
#include <string>
#include <vector>
#include "rddi/coupling.hpp"

namespace rddi {

// single-excitation amplitudes of the donor/acceptor pair at one instant
struct AmplitudePair {
    cplx C_A, C_B;
};

struct ProbabilityPair {
    double P_A = 0.0, P_B = 0.0;
};

struct Trajectory {
    std::vector<double> times; // natural units; scale by gamma0 for figures
    std::vector<cplx> C_A, C_B;
    std::vector<double> P_A, P_B, P_L; // P_L = 1 - P_A - P_B

    void push(double t, cplx ca, cplx cb);
};

// biexponential solution for atom A initially excited; exact for
// time-independent K's and rates, any degree of asymmetry
AmplitudePair weak_amplitudes(const CouplingSet& cs, double t);

// symmetric-pair closed form; refuses input outside the identical-atom
// conditions
ProbabilityPair identical_probabilities(const CouplingSet& cs, double t);

// labels for the donor/acceptor rate hierarchy and the trapping regimes
enum class CaseLabel { i, ii, iii, general };

struct RateThresholds {
    double much_greater = 100.0; // ratio reading as >>
    double comparable = 1.1;     // ratio window reading as ~=
};

// time of the steepest growth of P_B (the inflection of the transfer curve)
double transfer_time_t0(const CouplingSet& cs);

struct RateReport {
    double t0 = 0.0;
    double w1 = 0.0;         // peak transfer rate dP_B/dt at t0
    double w1_numeric = 0.0; // finite-difference cross-check of w1
    double w = 0.0;          // golden-rule rate with p_A = exp(-Gamma_AA t0)
    double ratio = 0.0;
    double corrected_ratio = 0.0; // ratio * exp(Gamma_BB t0)
    CaseLabel label = CaseLabel::general;
};

// t0 and the nonperturbative peak rate, cross-checked against the numerical
// maximum slope of P_B (disagreement beyond 1% throws)
RateReport transfer_rate_w1(const CouplingSet& cs,
                            const RateThresholds& thr = {});

// completes the report with the golden-rule rate and the (corrected) ratios
RateReport golden_rule_rate(const CouplingSet& cs,
                            const RateThresholds& thr = {});

// closed-form solution when one superposition state exchanges the excitation
// resonantly with a narrow field mode
struct StrongSolution {
    int branch = +1;           // +1: symmetric superposition on resonance
    double Omega = 0.0;        // Rabi frequency of the resonant branch
    double Gamma_other = 0.0;  // decay rate of the detuned superposition
    double delta = 0.0;        // dipole-dipole shift used for the beat
    double detuning = 0.0;     // residual |omega_tilde -+ delta - omega_m|
    bool narrow_line = true;   // false when Gamma_other ~ delta_omega_m, where
                               // the cross term is only qualitative
};

StrongSolution classify_strong(const CouplingSet& cs, const ResonanceInfo& res,
                               double resonance_tolerance = 0.25);

AmplitudePair strong_amplitudes(const CouplingSet& cs, const ResonanceInfo& res,
                                double t, double resonance_tolerance = 0.25);
ProbabilityPair strong_probabilities(const CouplingSet& cs,
                                     const ResonanceInfo& res, double t,
                                     double resonance_tolerance = 0.25);

// time-averaged populations over one exchange cycle, with the trapping label
struct TrappingReport {
    CaseLabel label = CaseLabel::general;
    double cycle = 0.0; // averaging window, natural units
    double P_A_avg = 0.0, P_B_avg = 0.0, P_L_avg = 0.0;
};

TrappingReport classify_regime(const CouplingSet& cs, const ResonanceInfo& res,
                               const RateThresholds& thr = {});

} // namespace rddi
