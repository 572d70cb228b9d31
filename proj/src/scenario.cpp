#include "rddi/scenario.hpp"
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include "rddi/errors.hpp"

namespace rddi {

namespace {

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt(const Eigen::Vector3d& v) {
    return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z());
}

const char* fmt(bool b) { return b ? "true" : "false"; }

struct Cursor {
    std::string origin;
    int line = 0;
};

[[noreturn]] void fail(const Cursor& c, const std::string& msg) {
    throw ConfigError(c.origin + ":" + std::to_string(c.line) + ": " + msg);
}

std::vector<std::string> tokenize(std::string line) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const Cursor& c, const std::string& tok) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        fail(c, "expected a number, got '" + tok + "'");
    return v;
}

int parse_int(const Cursor& c, const std::string& tok) {
    int v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        fail(c, "expected an integer, got '" + tok + "'");
    return v;
}

bool parse_bool(const Cursor& c, const std::string& tok) {
    if (tok == "true") return true;
    if (tok == "false") return false;
    fail(c, "expected true or false, got '" + tok + "'");
}

// per-key handlers: values are the tokens after the key
using KeyHandler = std::function<void(const Cursor&, const std::vector<std::string>&)>;

void expect_count(const Cursor& c, const std::vector<std::string>& vals,
                  size_t n, const std::string& key) {
    if (vals.size() != n)
        fail(c, "key '" + key + "' takes " + std::to_string(n) +
                    (n == 1 ? " value" : " values") + ", got " +
                    std::to_string(vals.size()));
}

Eigen::Vector3d parse_vec3(const Cursor& c, const std::vector<std::string>& vals) {
    return {parse_double(c, vals[0]), parse_double(c, vals[1]),
            parse_double(c, vals[2])};
}

} // namespace

std::string to_string(GeometryKind k) {
    switch (k) {
    case GeometryKind::none: return "none";
    case GeometryKind::bulk: return "bulk";
    case GeometryKind::sphere: return "sphere";
    }
    return "none";
}

std::string to_string(RunMode m) {
    switch (m) {
    case RunMode::dynamics_weak: return "dynamics-weak";
    case RunMode::dynamics_strong: return "dynamics-strong";
    case RunMode::dynamics_volterra: return "dynamics-volterra";
    case RunMode::rates: return "rates";
    case RunMode::spectrum_weak: return "spectrum-weak";
    case RunMode::spectrum_strong: return "spectrum-strong";
    case RunMode::spectrum_numeric: return "spectrum-numeric";
    case RunMode::resonance_scan: return "resonance-scan";
    }
    return "rates";
}

RunMode run_mode_from_string(const std::string& s) {
    static const std::pair<const char*, RunMode> table[] = {
        {"dynamics-weak", RunMode::dynamics_weak},
        {"dynamics-strong", RunMode::dynamics_strong},
        {"dynamics-volterra", RunMode::dynamics_volterra},
        {"rates", RunMode::rates},
        {"spectrum-weak", RunMode::spectrum_weak},
        {"spectrum-strong", RunMode::spectrum_strong},
        {"spectrum-numeric", RunMode::spectrum_numeric},
        {"resonance-scan", RunMode::resonance_scan},
    };
    for (auto& [name, mode] : table)
        if (s == name) return mode;
    std::string valid;
    for (auto& [name, mode] : table) {
        if (!valid.empty()) valid += ", ";
        valid += name;
    }
    throw ConfigError("unknown run mode '" + s + "'; valid modes: " + valid);
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    Scenario sc;
    Cursor cur{origin, 0};

    // block name -> (key -> handler); handlers capture sc
    auto d = [&](auto setter) { // scalar double
        return [&sc, setter](const Cursor& c, const std::vector<std::string>& v) {
            setter(sc, parse_double(c, v[0]));
        };
    };
    using Vals = std::vector<std::string>;

    std::map<std::string, std::map<std::string, KeyHandler>> schema;
    schema["material"] = {
        {"omega_p", d([](Scenario& s, double v) { s.material.omega_p = v; })},
        {"gamma", d([](Scenario& s, double v) { s.material.gamma = v; })},
        {"background", d([](Scenario& s, double v) { s.material.background = v; })},
        {"table", [&sc](const Cursor&, const Vals& v) { sc.material.table = v[0]; }},
    };
    schema["geometry"] = {
        {"kind",
         [&sc](const Cursor& c, const Vals& v) {
             if (v[0] == "none") sc.geometry.kind = GeometryKind::none;
             else if (v[0] == "bulk") sc.geometry.kind = GeometryKind::bulk;
             else if (v[0] == "sphere") sc.geometry.kind = GeometryKind::sphere;
             else fail(c, "geometry kind must be none, bulk or sphere");
         }},
        {"diameter", d([](Scenario& s, double v) { s.geometry.diameter = v; })},
    };
    schema["atoms"] = {
        {"gamma0", d([](Scenario& s, double v) { s.atoms.gamma0 = v; })},
        {"omega_A", d([](Scenario& s, double v) { s.atoms.omega_A = v; })},
        {"omega_B", d([](Scenario& s, double v) { s.atoms.omega_B = v; })},
        {"position_A",
         [&sc](const Cursor& c, const Vals& v) { sc.atoms.position_A = parse_vec3(c, v); }},
        {"position_B",
         [&sc](const Cursor& c, const Vals& v) { sc.atoms.position_B = parse_vec3(c, v); }},
        {"dipole_A",
         [&sc](const Cursor& c, const Vals& v) { sc.atoms.dipole_A = parse_vec3(c, v); }},
        {"dipole_B",
         [&sc](const Cursor& c, const Vals& v) { sc.atoms.dipole_B = parse_vec3(c, v); }},
        {"complex_dipoles",
         [&sc](const Cursor& c, const Vals& v) {
             sc.atoms.complex_dipoles = parse_bool(c, v[0]);
         }},
        {"dipole_A_imag",
         [&sc](const Cursor& c, const Vals& v) { sc.atoms.dipole_A_imag = parse_vec3(c, v); }},
        {"dipole_B_imag",
         [&sc](const Cursor& c, const Vals& v) { sc.atoms.dipole_B_imag = parse_vec3(c, v); }},
    };
    schema["detector"] = {
        {"position",
         [&sc](const Cursor& c, const Vals& v) { sc.detector.position = parse_vec3(c, v); }},
    };
    schema["run"] = {
        {"mode",
         [&sc](const Cursor& c, const Vals& v) {
             try {
                 sc.run.mode = run_mode_from_string(v[0]);
             } catch (const ConfigError& e) {
                 fail(c, e.what());
             }
         }},
        {"t_max", d([](Scenario& s, double v) { s.run.t_max = v; })},
        {"dt", d([](Scenario& s, double v) { s.run.dt = v; })},
        {"omega_min", d([](Scenario& s, double v) { s.run.omega_min = v; })},
        {"omega_max", d([](Scenario& s, double v) { s.run.omega_max = v; })},
        {"points",
         [&sc](const Cursor& c, const Vals& v) { sc.run.points = parse_int(c, v[0]); }},
        {"observation_time",
         d([](Scenario& s, double v) { s.run.observation_time = v; })},
        {"resonance_lo", d([](Scenario& s, double v) { s.run.resonance_lo = v; })},
        {"resonance_hi", d([](Scenario& s, double v) { s.run.resonance_hi = v; })},
        {"tune_resonance",
         [&sc](const Cursor& c, const Vals& v) {
             sc.run.tune_resonance = parse_bool(c, v[0]);
         }},
        {"apply_shift",
         [&sc](const Cursor& c, const Vals& v) {
             sc.run.apply_shift = parse_bool(c, v[0]);
         }},
        {"weight_mode",
         [&sc](const Cursor&, const Vals& v) { sc.run.weight_mode = v[0]; }},
        {"tolerance_profile",
         [&sc](const Cursor&, const Vals& v) { sc.run.tolerance_profile = v[0]; }},
    };
    schema["output"] = {
        {"prefix", [&sc](const Cursor&, const Vals& v) { sc.output.prefix = v[0]; }},
        {"normalization",
         [&sc](const Cursor&, const Vals& v) { sc.output.normalization = v[0]; }},
    };

    // vector-valued keys take 3 numbers, everything else one token
    auto value_count = [](const std::string& key) -> size_t {
        return (key.rfind("position", 0) == 0 || key.rfind("dipole", 0) == 0) ? 3
                                                                              : 1;
    };

    std::istringstream in(text);
    std::string line;
    std::string block;
    std::set<std::string> blocks_seen;
    while (std::getline(in, line)) {
        ++cur.line;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (block.empty()) {
            if (toks.size() == 2 && toks[1] == "{") {
                if (!schema.count(toks[0])) fail(cur, "unknown block '" + toks[0] + "'");
                if (!blocks_seen.insert(toks[0]).second)
                    fail(cur, "duplicate block '" + toks[0] + "'");
                block = toks[0];
                continue;
            }
            fail(cur, "expected a block opening '<name> {', got '" + toks[0] + "'");
        }
        if (toks.size() == 1 && toks[0] == "}") {
            block.clear();
            continue;
        }
        const std::string key = toks[0];
        auto& keys = schema[block];
        auto it = keys.find(key);
        if (it == keys.end())
            fail(cur, "unknown key '" + key + "' in block '" + block + "'");
        const std::string qualified = block + "." + key;
        if (!sc.provided.insert(qualified).second)
            fail(cur, "duplicate key '" + key + "' in block '" + block + "'");
        std::vector<std::string> vals(toks.begin() + 1, toks.end());
        expect_count(cur, vals, value_count(key), key);
        it->second(cur, vals);
    }
    if (!block.empty())
        fail(cur, "unterminated block '" + block + "' (missing '}')");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), std::filesystem::path(path).filename().string());
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream o;
    o << "material {\n";
    if (!sc.material.table.empty()) {
        o << "  table " << sc.material.table << "\n";
    } else {
        o << "  omega_p " << fmt(sc.material.omega_p) << "\n";
        o << "  gamma " << fmt(sc.material.gamma) << "\n";
        o << "  background " << fmt(sc.material.background) << "\n";
    }
    o << "}\n";
    o << "geometry {\n";
    o << "  kind " << to_string(sc.geometry.kind) << "\n";
    if (sc.geometry.kind == GeometryKind::sphere)
        o << "  diameter " << fmt(sc.geometry.diameter) << "\n";
    o << "}\n";
    o << "atoms {\n";
    o << "  gamma0 " << fmt(sc.atoms.gamma0) << "\n";
    o << "  omega_A " << fmt(sc.atoms.omega_A) << "\n";
    o << "  omega_B " << fmt(sc.atoms.omega_B) << "\n";
    o << "  position_A " << fmt(sc.atoms.position_A) << "\n";
    o << "  position_B " << fmt(sc.atoms.position_B) << "\n";
    o << "  dipole_A " << fmt(sc.atoms.dipole_A) << "\n";
    o << "  dipole_B " << fmt(sc.atoms.dipole_B) << "\n";
    o << "  complex_dipoles " << fmt(sc.atoms.complex_dipoles) << "\n";
    if (sc.atoms.complex_dipoles) {
        o << "  dipole_A_imag " << fmt(sc.atoms.dipole_A_imag) << "\n";
        o << "  dipole_B_imag " << fmt(sc.atoms.dipole_B_imag) << "\n";
    }
    o << "}\n";
    if (sc.has("detector.position")) {
        o << "detector {\n";
        o << "  position " << fmt(sc.detector.position) << "\n";
        o << "}\n";
    }
    o << "run {\n";
    o << "  mode " << to_string(sc.run.mode) << "\n";
    o << "  t_max " << fmt(sc.run.t_max) << "\n";
    o << "  dt " << fmt(sc.run.dt) << "\n";
    o << "  omega_min " << fmt(sc.run.omega_min) << "\n";
    o << "  omega_max " << fmt(sc.run.omega_max) << "\n";
    o << "  points " << sc.run.points << "\n";
    o << "  observation_time " << fmt(sc.run.observation_time) << "\n";
    o << "  resonance_lo " << fmt(sc.run.resonance_lo) << "\n";
    o << "  resonance_hi " << fmt(sc.run.resonance_hi) << "\n";
    o << "  tune_resonance " << fmt(sc.run.tune_resonance) << "\n";
    o << "  apply_shift " << fmt(sc.run.apply_shift) << "\n";
    o << "  weight_mode " << sc.run.weight_mode << "\n";
    o << "  tolerance_profile " << sc.run.tolerance_profile << "\n";
    o << "}\n";
    o << "output {\n";
    o << "  prefix " << sc.output.prefix << "\n";
    o << "  normalization " << sc.output.normalization << "\n";
    o << "}\n";
    return o.str();
}

namespace {

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

bool is_dynamics(RunMode m) {
    return m == RunMode::dynamics_weak || m == RunMode::dynamics_strong ||
           m == RunMode::dynamics_volterra;
}

bool is_spectrum(RunMode m) {
    return m == RunMode::spectrum_weak || m == RunMode::spectrum_strong ||
           m == RunMode::spectrum_numeric;
}

bool needs_sphere(RunMode m) {
    return m == RunMode::dynamics_strong || m == RunMode::dynamics_volterra ||
           m == RunMode::spectrum_strong || m == RunMode::resonance_scan;
}

void check_outside_sphere(const Scenario& sc, const Eigen::Vector3d& pos_lambda,
                          const std::string& who) {
    const double radius = 0.5 * sc.geometry.diameter;
    const double r = pos_lambda.norm();
    if (!(r > radius))
        throw GeometryError(who + " must sit strictly outside the sphere (|r| = " +
                            fmt(r) + " lambda_T, radius = " + fmt(radius) +
                            " lambda_T)");
}

} // namespace

void validate_scenario(const Scenario& sc, const std::string& base_dir) {
    const auto& m = sc.material;
    if (!m.table.empty()) {
        const std::string path = resolve_path(base_dir, m.table);
        if (!std::filesystem::exists(path))
            throw ConfigError("material table '" + path + "' does not exist");
        Material::from_table_file(path); // surface format errors now
    } else {
        if (m.omega_p < 0.0 || m.gamma < 0.0)
            throw ConfigError("material omega_p and gamma must be non-negative");
        if (!(m.background > 0.0))
            throw ConfigError("material background permittivity must be positive");
    }

    if (sc.geometry.kind == GeometryKind::sphere && !(sc.geometry.diameter > 0.0))
        throw ConfigError("geometry kind sphere needs a positive diameter");

    const auto& a = sc.atoms;
    if (!(a.gamma0 > 0.0)) throw ConfigError("atoms gamma0 must be positive");
    if (!(a.omega_A > 0.0) || !(a.omega_B > 0.0))
        throw ConfigError("atom transition frequencies must be positive");
    if ((a.position_A - a.position_B).norm() < 1e-12)
        throw ConfigError("atoms A and B must sit at distinct positions");
    if (!a.complex_dipoles &&
        (a.dipole_A_imag.norm() > 0.0 || a.dipole_B_imag.norm() > 0.0))
        throw ConfigError(
            "dipole imaginary parts given but complex_dipoles is false");
    const double dA2 = a.dipole_A.squaredNorm() + a.dipole_A_imag.squaredNorm();
    const double dB2 = a.dipole_B.squaredNorm() + a.dipole_B_imag.squaredNorm();
    if (!(dA2 > 0.0) || !(dB2 > 0.0))
        throw ConfigError("dipole directions must be non-zero");

    if (sc.geometry.kind == GeometryKind::sphere) {
        check_outside_sphere(sc, a.position_A, "atom A");
        check_outside_sphere(sc, a.position_B, "atom B");
        if (sc.has("detector.position"))
            check_outside_sphere(sc, sc.detector.position, "the detector");
    }

    const auto& r = sc.run;
    const std::string mode = to_string(r.mode);
    if (is_dynamics(r.mode) || r.mode == RunMode::spectrum_numeric) {
        if (!(r.dt > 0.0))
            throw ConfigError("run.dt must be positive for mode " + mode);
    }
    if (is_dynamics(r.mode) && !(r.t_max > 0.0))
        throw ConfigError("run.t_max must be positive for mode " + mode);
    if (r.mode == RunMode::spectrum_numeric && !(r.observation_time > 0.0))
        throw ConfigError("run.observation_time must be positive for mode " + mode);
    if (is_spectrum(r.mode) && !sc.has("detector.position"))
        throw ConfigError("mode " + mode + " needs a detector block");
    if (needs_sphere(r.mode) && sc.geometry.kind != GeometryKind::sphere)
        throw ConfigError("mode " + mode + " needs sphere geometry (a narrow "
                          "field resonance backs it)");
    if (needs_sphere(r.mode) || r.mode == RunMode::spectrum_numeric) {
        if (!(r.resonance_lo > 0.0) || !(r.resonance_hi > r.resonance_lo))
            throw ConfigError("resonance window needs 0 < resonance_lo < resonance_hi");
    }
    if (sc.has("run.omega_min") || sc.has("run.omega_max")) {
        if (r.omega_min != 0.0 || r.omega_max != 0.0) {
            if (!(r.omega_min >= 0.0) || !(r.omega_max > r.omega_min))
                throw ConfigError("spectral grid needs omega_min < omega_max");
        }
    }
    if (r.points < 0) throw ConfigError("run.points must be non-negative");
    if (r.tune_resonance) {
        if (!(r.mode == RunMode::dynamics_strong || r.mode == RunMode::dynamics_volterra ||
              r.mode == RunMode::spectrum_strong || r.mode == RunMode::spectrum_numeric))
            throw ConfigError("tune_resonance applies to the strong-coupling "
                              "modes only");
        if (a.omega_A != a.omega_B)
            throw ConfigError("tune_resonance requires omega_A == omega_B");
    }
    if (r.weight_mode != "kk" && r.weight_mode != "pv" && r.weight_mode != "delta")
        throw ConfigError("weight_mode must be kk, pv or delta");
    if (r.weight_mode == "pv" && a.complex_dipoles)
        throw ConfigError("weight_mode pv handles real dipole orientations only");
    if (r.tolerance_profile != "paper" && r.tolerance_profile != "fast")
        throw ConfigError("tolerance_profile must be paper or fast");

    if (sc.output.prefix.empty()) throw ConfigError("output.prefix must not be empty");
    for (char ch : sc.output.prefix) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                        (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' ||
                        ch == '.';
        if (!ok)
            throw ConfigError("output.prefix may use letters, digits, '_', '-', "
                              "'.' only");
    }
    if (sc.output.normalization != "figure" && sc.output.normalization != "raw")
        throw ConfigError("output.normalization must be figure or raw");
}

Material make_material(const Scenario& sc, const std::string& base_dir) {
    if (!sc.material.table.empty())
        return Material::from_table_file(resolve_path(base_dir, sc.material.table));
    return Material::drude_lorentz(sc.material.omega_p, sc.material.gamma,
                                   sc.material.background);
}

Environment make_environment(const Scenario& sc, const std::string& base_dir) {
    Environment env;
    switch (sc.geometry.kind) {
    case GeometryKind::none: break;
    case GeometryKind::bulk: env.bulk = make_material(sc, base_dir); break;
    case GeometryKind::sphere:
        env.sphere = SphereGeometry{sc.geometry.diameter, make_material(sc, base_dir)};
        break;
    }
    return env;
}

AtomPair make_atom_pair(const Scenario& sc) {
    auto build = [&](const Eigen::Vector3d& pos, const Eigen::Vector3d& re,
                     const Eigen::Vector3d& im, double omega) {
        Atom at;
        at.position_lambda = pos;
        Eigen::Vector3cd dip = re.cast<cplx>();
        if (sc.atoms.complex_dipoles) dip += I * im.cast<cplx>();
        at.dipole = dip.normalized();
        at.gamma0 = sc.atoms.gamma0;
        at.omega = omega;
        at.omega_tilde = omega;
        return at;
    };
    AtomPair pair;
    pair.A = build(sc.atoms.position_A, sc.atoms.dipole_A, sc.atoms.dipole_A_imag,
                   sc.atoms.omega_A);
    pair.B = build(sc.atoms.position_B, sc.atoms.dipole_B, sc.atoms.dipole_B_imag,
                   sc.atoms.omega_B);
    return pair;
}

const std::vector<SweepParameter>& sweep_parameters() {
    static const std::vector<SweepParameter> params = [] {
        std::vector<SweepParameter> p;
        auto add = [&](std::string path, auto get, auto set) {
            p.push_back({std::move(path), get, set});
        };
        add("material.omega_p",
            [](const Scenario& s) { return s.material.omega_p; },
            [](Scenario& s, double v) { s.material.omega_p = v; });
        add("material.gamma",
            [](const Scenario& s) { return s.material.gamma; },
            [](Scenario& s, double v) { s.material.gamma = v; });
        add("material.background",
            [](const Scenario& s) { return s.material.background; },
            [](Scenario& s, double v) { s.material.background = v; });
        add("geometry.diameter",
            [](const Scenario& s) { return s.geometry.diameter; },
            [](Scenario& s, double v) { s.geometry.diameter = v; });
        add("atoms.gamma0", [](const Scenario& s) { return s.atoms.gamma0; },
            [](Scenario& s, double v) { s.atoms.gamma0 = v; });
        add("atoms.omega_A", [](const Scenario& s) { return s.atoms.omega_A; },
            [](Scenario& s, double v) { s.atoms.omega_A = v; });
        add("atoms.omega_B", [](const Scenario& s) { return s.atoms.omega_B; },
            [](Scenario& s, double v) { s.atoms.omega_B = v; });
        const char axes[] = {'x', 'y', 'z'};
        for (int i = 0; i < 3; ++i) {
            add(std::string("atoms.position_A.") + axes[i],
                [i](const Scenario& s) { return s.atoms.position_A[i]; },
                [i](Scenario& s, double v) { s.atoms.position_A[i] = v; });
            add(std::string("atoms.position_B.") + axes[i],
                [i](const Scenario& s) { return s.atoms.position_B[i]; },
                [i](Scenario& s, double v) { s.atoms.position_B[i] = v; });
            add(std::string("detector.position.") + axes[i],
                [i](const Scenario& s) { return s.detector.position[i]; },
                [i](Scenario& s, double v) { s.detector.position[i] = v; });
        }
        // interatomic distance: moves B along the current A->B direction
        add("atoms.separation",
            [](const Scenario& s) {
                return (s.atoms.position_B - s.atoms.position_A).norm();
            },
            [](Scenario& s, double v) {
                Eigen::Vector3d dir = s.atoms.position_B - s.atoms.position_A;
                const double n = dir.norm();
                Eigen::Vector3d u =
                    n > 1e-12 ? Eigen::Vector3d(dir / n) : Eigen::Vector3d::UnitZ();
                s.atoms.position_B = s.atoms.position_A + v * u;
            });
        add("run.t_max", [](const Scenario& s) { return s.run.t_max; },
            [](Scenario& s, double v) { s.run.t_max = v; });
        add("run.dt", [](const Scenario& s) { return s.run.dt; },
            [](Scenario& s, double v) { s.run.dt = v; });
        add("run.observation_time",
            [](const Scenario& s) { return s.run.observation_time; },
            [](Scenario& s, double v) { s.run.observation_time = v; });
        add("run.omega_min", [](const Scenario& s) { return s.run.omega_min; },
            [](Scenario& s, double v) { s.run.omega_min = v; });
        add("run.omega_max", [](const Scenario& s) { return s.run.omega_max; },
            [](Scenario& s, double v) { s.run.omega_max = v; });
        return p;
    }();
    return params;
}

void set_sweep_parameter(Scenario& sc, const std::string& path, double value) {
    for (const auto& p : sweep_parameters()) {
        if (p.path == path) {
            p.set(sc, value);
            return;
        }
    }
    std::string valid;
    for (const auto& p : sweep_parameters()) {
        if (!valid.empty()) valid += ", ";
        valid += p.path;
    }
    throw ConfigError("unknown sweep parameter '" + path +
                      "'; valid paths: " + valid);
}

} // namespace rddi
