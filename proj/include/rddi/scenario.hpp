#pragma once
#include <functional>
#include <set>
#include <string>
#include <vector>
#include "rddi/coupling.hpp"

namespace rddi {

// Scenario files are flat key/value text grouped into one level of named
// blocks:
//
//   # comment to end of line
//   material {
//     omega_p 0.5          # Drude-Lorentz parameters (omega_T units), or a
//     gamma 1e-06          # single `table <path>` line for tabulated eps
//     background 1
//   }
//   geometry {
//     kind sphere          # none | bulk | sphere
//     diameter 20          # lambda_T, sphere only
//   }
//   atoms {
//     gamma0 1e-06         # free-space decay rate, omega_T units
//     omega_A 1.05048      # bare transition frequencies, omega_T units
//     omega_B 1.05048
//     position_A 0 0 10.02 # lambda_T
//     position_B 0 0 -10.02
//     dipole_A 0 0 1       # direction only; normalised internally
//     dipole_B 0 0 1
//     complex_dipoles false  # true enables dipole_*_imag components
//   }
//   detector { position 0 0 20 }
//   run {
//     mode spectrum-weak   # see RunMode below
//     ...                  # mode-specific numbers, see RunBlock
//   }
//   output {
//     prefix fig1_solid
//     normalization figure # figure | raw
//   }
//
// Unknown blocks and unknown keys are hard errors carrying the offending
// line number, as are duplicate keys.  All physical inputs are quoted in the
// omega_T / lambda_T / Gamma0 unit system; conversion to natural units
// happens behind this boundary.

enum class GeometryKind { none, bulk, sphere };

enum class RunMode {
    dynamics_weak,
    dynamics_strong,
    dynamics_volterra,
    rates,
    spectrum_weak,
    spectrum_strong,
    spectrum_numeric,
    resonance_scan,
};

std::string to_string(GeometryKind k);
std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s); // ConfigError on bad name

struct MaterialBlock {
    double omega_p = 0.0;
    double gamma = 0.0;
    double background = 1.0;
    std::string table; // non-empty: tabulated eps from this file
};

struct GeometryBlock {
    GeometryKind kind = GeometryKind::none;
    double diameter = 0.0; // lambda_T
};

struct AtomsBlock {
    double gamma0 = 1e-6;
    double omega_A = 1.0, omega_B = 1.0;
    Eigen::Vector3d position_A = Eigen::Vector3d::Zero();
    Eigen::Vector3d position_B = Eigen::Vector3d::Zero();
    Eigen::Vector3d dipole_A = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d dipole_B = Eigen::Vector3d::UnitZ();
    bool complex_dipoles = false;
    Eigen::Vector3d dipole_A_imag = Eigen::Vector3d::Zero();
    Eigen::Vector3d dipole_B_imag = Eigen::Vector3d::Zero();
};

struct DetectorBlock {
    Eigen::Vector3d position = Eigen::Vector3d::Zero(); // lambda_T
};

struct RunBlock {
    RunMode mode = RunMode::rates;
    double t_max = 0.0; // dynamics window, units of 1/Gamma0
    double dt = 0.0;    // sampling step, units of 1/Gamma0
    // spectral grid (omega_T units); omega_min == omega_max == 0 selects the
    // automatic grid built from the coupling scales
    double omega_min = 0.0, omega_max = 0.0;
    int points = 0; // 0: module default
    double observation_time = 0.0; // finite detection window, 1/Gamma0
    // window searched for a field resonance where one is required
    double resonance_lo = 1.04, resonance_hi = 1.06;
    // solve omega_tilde = omega_m + delta so the superposition state sits
    // exactly on the field resonance (strong-coupling modes only)
    bool tune_resonance = false;
    // apply the environment-induced self shift: omega_tilde = omega - shift
    bool apply_shift = false;
    std::string weight_mode = "kk";         // kk | pv | delta
    std::string tolerance_profile = "paper"; // paper | fast
};

struct OutputBlock {
    std::string prefix = "run";
    std::string normalization = "figure"; // figure | raw
};

struct Scenario {
    MaterialBlock material;
    GeometryBlock geometry;
    AtomsBlock atoms;
    DetectorBlock detector;
    RunBlock run;
    OutputBlock output;
    // "block.key" entries seen in the parsed text; drives the mode-dependent
    // required-field checks
    std::set<std::string> provided;

    bool has(const std::string& block_key) const {
        return provided.count(block_key) != 0;
    }
};

// Parse scenario text; `origin` names the source in error messages
// ("file.scn:12: ...").  Throws ConfigError with line diagnostics.
Scenario parse_scenario(const std::string& text,
                        const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);

// Canonical form: fixed block and key order, shortest round-trip number
// formatting.  serialize(parse(s)) == s for files in canonical form.
std::string serialize_scenario(const Scenario& sc);

// Cross-field and physics checks: positive rates and frequencies, distinct
// atom positions, mode-required fields present, referenced tables readable,
// atoms and detector outside the sphere (GeometryError).  `base_dir` anchors
// relative table paths.
void validate_scenario(const Scenario& sc, const std::string& base_dir = "");

// Scenario -> simulation inputs.  validate_scenario is assumed to have run.
Material make_material(const Scenario& sc, const std::string& base_dir = "");
Environment make_environment(const Scenario& sc, const std::string& base_dir = "");
AtomPair make_atom_pair(const Scenario& sc);

// Scalar fields addressable by parameter sweeps, e.g. "atoms.position_B.z"
// or the derived "atoms.separation" (moves B along the A->B direction).
struct SweepParameter {
    std::string path;
    std::function<double(const Scenario&)> get;
    std::function<void(Scenario&, double)> set;
};
const std::vector<SweepParameter>& sweep_parameters();

// ConfigError listing all valid paths when `path` is unknown.
void set_sweep_parameter(Scenario& sc, const std::string& path, double value);

} // namespace rddi
