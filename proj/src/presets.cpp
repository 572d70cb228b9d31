#include "rddi/presets.hpp"
#include <cmath>
#include "rddi/errors.hpp"

namespace rddi {

namespace {

// serialize_scenario emits exactly these keys; marking them provided keeps
// parse -> serialize a fixed point for generated preset files
void mark_canonical(Scenario& sc) {
    auto add = [&](const char* k) { sc.provided.insert(k); };
    if (sc.material.table.empty()) {
        add("material.omega_p");
        add("material.gamma");
        add("material.background");
    } else {
        add("material.table");
    }
    add("geometry.kind");
    if (sc.geometry.kind == GeometryKind::sphere) add("geometry.diameter");
    for (const char* k :
         {"atoms.gamma0", "atoms.omega_A", "atoms.omega_B", "atoms.position_A",
          "atoms.position_B", "atoms.dipole_A", "atoms.dipole_B",
          "atoms.complex_dipoles"})
        add(k);
    if (sc.atoms.complex_dipoles) {
        add("atoms.dipole_A_imag");
        add("atoms.dipole_B_imag");
    }
    for (const char* k :
         {"run.mode", "run.t_max", "run.dt", "run.omega_min", "run.omega_max",
          "run.points", "run.observation_time", "run.resonance_lo",
          "run.resonance_hi", "run.tune_resonance", "run.apply_shift",
          "run.weight_mode", "run.tolerance_profile"})
        add(k);
    add("output.prefix");
    add("output.normalization");
}

void with_detector(Scenario& sc, const Eigen::Vector3d& pos) {
    sc.detector.position = pos;
    sc.provided.insert("detector.position");
}

// sphere of diameter 20 lambda_T, both atoms 0.02 lambda_T above the surface
Scenario microsphere_base() {
    Scenario sc;
    sc.material.omega_p = 0.5;
    sc.material.gamma = 1e-6;
    sc.material.background = 1.0;
    sc.geometry.kind = GeometryKind::sphere;
    sc.geometry.diameter = 20.0;
    sc.atoms.gamma0 = 1e-6;
    sc.run.resonance_lo = 1.0504;
    sc.run.resonance_hi = 1.0506;
    return sc;
}

// diametrically opposite atoms, equal radial dipoles, detector on atom A's
// radius
Scenario diametric(double omega, const std::string& prefix) {
    Scenario sc = microsphere_base();
    sc.atoms.omega_A = sc.atoms.omega_B = omega;
    sc.atoms.position_A = {0.0, 0.0, 10.02};
    sc.atoms.position_B = {0.0, 0.0, -10.02};
    sc.atoms.dipole_A = Eigen::Vector3d::UnitZ();
    sc.atoms.dipole_B = Eigen::Vector3d::UnitZ();
    with_detector(sc, {0.0, 0.0, 20.0});
    sc.run.mode = RunMode::spectrum_weak;
    sc.run.points = 4001;
    sc.output.prefix = prefix;
    return sc;
}

// two atoms a chord R apart on the 10.02 lambda_T radius, equal dipoles
// along z (radial to within R / (2 radius))
Scenario close_pair(double omega, double chord, const std::string& prefix) {
    Scenario sc = microsphere_base();
    const double radius = 10.02;
    const double x = 0.5 * chord;
    const double z = std::sqrt(radius * radius - x * x);
    sc.atoms.omega_A = sc.atoms.omega_B = omega;
    sc.atoms.position_A = {-x, 0.0, z};
    sc.atoms.position_B = {x, 0.0, z};
    sc.atoms.dipole_A = Eigen::Vector3d::UnitZ();
    sc.atoms.dipole_B = Eigen::Vector3d::UnitZ();
    with_detector(sc, 20.0 * sc.atoms.position_A.normalized());
    sc.run.mode = RunMode::spectrum_strong;
    sc.run.tune_resonance = true;
    sc.run.points = 4001;
    sc.output.prefix = prefix;
    return sc;
}

Scenario bulk_pair(double separation, const std::string& prefix) {
    Scenario sc;
    sc.material.omega_p = 0.5;
    sc.material.gamma = 0.1;
    sc.material.background = 1.0;
    sc.geometry.kind = GeometryKind::bulk;
    sc.atoms.gamma0 = 1e-6;
    sc.atoms.omega_A = sc.atoms.omega_B = 0.8; // transparent side of the line
    sc.atoms.position_A = Eigen::Vector3d::Zero();
    sc.atoms.position_B = {separation, 0.0, 0.0};
    sc.atoms.dipole_A = Eigen::Vector3d::UnitZ();
    sc.atoms.dipole_B = Eigen::Vector3d::UnitZ();
    sc.run.mode = RunMode::rates;
    sc.output.prefix = prefix;
    return sc;
}

Scenario build(const std::string& name) {
    if (name == "fig1_solid") return diametric(1.05048, name);
    if (name == "fig1_dashed") return diametric(1.050485, name);
    if (name == "fig1_dotted") return diametric(1.05048621, name);
    if (name == "fig2_case_i") return close_pair(1.04835747, 0.01, name);
    if (name == "fig2_case_ii") return close_pair(1.05045444, 0.027, name);
    if (name == "fig2_case_iii") {
        Scenario sc = diametric(1.0504867, name);
        sc.run.mode = RunMode::spectrum_strong;
        sc.run.tune_resonance = true;
        return sc;
    }
    if (name == "vacuum_pair") {
        Scenario sc;
        sc.atoms.gamma0 = 1e-6;
        sc.atoms.omega_A = sc.atoms.omega_B = 1.0;
        sc.atoms.position_A = Eigen::Vector3d::Zero();
        sc.atoms.position_B = {0.0, 0.0, 0.25};
        sc.atoms.dipole_A = Eigen::Vector3d::UnitX();
        sc.atoms.dipole_B = Eigen::Vector3d::UnitX();
        with_detector(sc, {0.0, 0.0, 5.0});
        sc.run.mode = RunMode::dynamics_weak;
        sc.run.t_max = 8.0;
        sc.run.dt = 0.01;
        sc.output.prefix = name;
        return sc;
    }
    if (name == "bulk_short_range") return bulk_pair(0.02, name);
    if (name == "bulk_long_range") return bulk_pair(3.0, name);
    std::string valid;
    for (const auto& n : preset_names()) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw ConfigError("unknown preset '" + name + "'; available: " + valid);
}

} // namespace

std::vector<std::string> preset_names() {
    return {"fig1_solid",   "fig1_dashed",     "fig1_dotted",
            "fig2_case_i",  "fig2_case_ii",    "fig2_case_iii",
            "vacuum_pair",  "bulk_short_range", "bulk_long_range"};
}

Scenario make_preset(const std::string& name) {
    Scenario sc = build(name);
    mark_canonical(sc);
    return sc;
}

} // namespace rddi
