#include "rddi/runner.hpp"
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include "rddi/dynamics.hpp"
#include "rddi/errors.hpp"
#include "rddi/spectrum.hpp"
#include "rddi/version.hpp"
#include "rddi/volterra.hpp"

namespace rddi {

namespace {

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt(const cplx& v) { return fmt(v.real()) + " " + fmt(v.imag()); }

const char* fmt(bool b) { return b ? "true" : "false"; }

const char* to_string(LineKind k) {
    switch (k) {
    case LineKind::doublet_plus: return "doublet-plus";
    case LineKind::doublet_minus: return "doublet-minus";
    case LineKind::pair: return "pair";
    case LineKind::residual: return "residual";
    }
    return "residual";
}

const char* to_string(Regime r) {
    switch (r) {
    case Regime::weak: return "weak";
    case Regime::strong: return "strong";
    case Regime::intermediate: return "intermediate";
    }
    return "weak";
}

const char* to_string(CaseLabel c) {
    switch (c) {
    case CaseLabel::i: return "i";
    case CaseLabel::ii: return "ii";
    case CaseLabel::iii: return "iii";
    case CaseLabel::general: return "general";
    }
    return "general";
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return x;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

Tolerances resolve_tolerances(const Scenario& sc, const RunOptions& opt,
                              std::string& name_out) {
    std::string name = opt.tolerance_profile.empty() ? sc.run.tolerance_profile
                                                     : opt.tolerance_profile;
    if (name != "paper" && name != "fast")
        throw ConfigError("tolerance profile must be paper or fast, got '" +
                          name + "'");
    name_out = name;
    return name == "fast" ? tolerance_profile_fast() : tolerance_profile_paper();
}

Atom at_frequency(Atom a, double w) {
    a.omega = w;
    a.omega_tilde = w;
    return a;
}

// decay rate of a probe with atom A's position and orientation, as a function
// of frequency: the resonance-search objective
double rate_probe(const Atom& probe, const Environment& env, double w,
                  const Tolerances& tol) {
    return gamma_coupling(at_frequency(probe, w), at_frequency(probe, w), env, tol)
        .real();
}

ResonanceInfo locate_resonance(const AtomPair& pair, const Environment& env,
                               const Scenario& sc, const Tolerances& tol) {
    return find_resonance(
        [&](double w) { return rate_probe(pair.A, env, w, tol); },
        sc.run.resonance_lo, sc.run.resonance_hi, tol.resonance_rel);
}

// Newton solve of omega - omega_m - s * delta(omega) = 0 so the superposition
// state closest to the mode lands exactly on it.  The dispersive wing of the
// mode makes the naive fixed point diverge near resonance, hence the
// derivative-based step.
double tune_to_resonance(AtomPair& pair, const Environment& env,
                         const ResonanceInfo& res, const Tolerances& tol) {
    double w = pair.A.omega_tilde;
    int s = 0;
    auto delta_at = [&](double x) {
        return delta_coupling(at_frequency(pair.A, x), at_frequency(pair.B, x),
                              env, tol)
            .real();
    };
    const double gtol = std::max(1e-13, 1e-3 * res.delta_omega_m);
    for (int it = 0; it < 20; ++it) {
        const double d = delta_at(w);
        if (s == 0)
            s = std::abs(w - d - res.omega_m) <= std::abs(w + d - res.omega_m) ? 1
                                                                               : -1;
        const double g = w - res.omega_m - s * d;
        if (std::abs(g) < gtol) break;
        const double h = std::max({res.delta_omega_m / 4.0, std::abs(g) / 16.0,
                                   1e-11});
        const double dprime = (delta_at(w + h) - delta_at(w - h)) / (2.0 * h);
        const double gprime = 1.0 - s * dprime;
        if (gprime == 0.0)
            throw ConvergenceError("tune_resonance: stationary point in the "
                                   "resonance condition");
        double step = -g / gprime;
        // keep the iterate inside the searched window
        const double lim = 0.5 * (res.omega_m);
        step = std::clamp(step, -lim, lim);
        w += step;
        if (it == 19)
            throw ConvergenceError(
                "tune_resonance: no self-consistent transition frequency after "
                "20 iterations (last residual " + fmt(g) + ")");
    }
    pair.A = at_frequency(pair.A, w);
    pair.B = at_frequency(pair.B, w);
    return w;
}

struct Sampling {
    double t_max_nat = 0.0;
    double dt_nat = 0.0;
    long steps = 0;
};

Sampling make_sampling(double t_max_lifetimes, double dt_lifetimes, double gamma0) {
    Sampling s;
    s.t_max_nat = t_max_lifetimes / gamma0;
    s.dt_nat = dt_lifetimes / gamma0;
    s.steps = std::lround(t_max_lifetimes / dt_lifetimes);
    if (s.steps < 1) throw ConfigError("run window shorter than one step");
    if (s.steps > 5'000'000)
        throw ConfigError("t_max/dt asks for " + std::to_string(s.steps) +
                          " samples; raise dt");
    return s;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---- artifact assembly ----------------------------------------------------

struct ManifestBuilder {
    std::ostringstream head;   // identity + versions + scenario echo
    std::ostringstream body;   // resolved parameters

    ManifestBuilder(const Scenario& sc, const std::string& tol_name) {
        head << "# run manifest\n";
        head << "artifact " << sc.output.prefix << "\n";
        head << "mode " << to_string(sc.run.mode) << "\n";
        head << "tolerance_profile " << tol_name << "\n";
        head << "normalization " << sc.output.normalization << "\n";
        head << "versions {\n";
        for (const char* m : {"material", "green", "coupling", "dynamics",
                              "spectrum", "cli"})
            head << "  " << m << " " << library_version << "\n";
        head << "}\n";
        head << "scenario-begin\n" << serialize_scenario(sc) << "scenario-end\n";
        body << "resolved {\n";
    }

    void kv(const std::string& key, const std::string& value) {
        body << "  " << key << " " << value << "\n";
    }
    void kv(const std::string& key, double value) { kv(key, fmt(value)); }

    std::string core() const { return head.str() + body.str() + "}\n"; }
};

void echo_coupling(ManifestBuilder& mb, const AtomPair& pair,
                   const CouplingSet& cs) {
    const double g0 = pair.A.gamma0;
    mb.kv("omega_tilde_A", pair.A.omega_tilde);
    mb.kv("omega_tilde_B", pair.B.omega_tilde);
    mb.kv("dipole_sq_A", dipole_sq(pair.A.gamma0, pair.A.omega_tilde));
    mb.kv("dipole_sq_B", dipole_sq(pair.B.gamma0, pair.B.omega_tilde));
    mb.kv("separation_lambda",
          (pair.B.position_lambda - pair.A.position_lambda).norm());
    mb.kv("gamma_AA_over_gamma0", cs.gamma(0, 0).real() / g0);
    mb.kv("gamma_BB_over_gamma0", cs.gamma(1, 1).real() / g0);
    mb.kv("gamma_AB_over_gamma0", fmt(cs.gamma(0, 1) / g0));
    mb.kv("delta_AB_over_gamma0", fmt(cs.delta_AB / g0));
    mb.kv("delta_BA_over_gamma0", fmt(cs.delta_BA / g0));
    mb.kv("symmetric", fmt(cs.symmetric));
}

void echo_resonance(ManifestBuilder& mb, const CouplingSet& cs,
                    const ResonanceInfo& res, double g0) {
    mb.kv("regime", to_string(cs.regime));
    mb.kv("omega_m", res.omega_m);
    mb.kv("delta_omega_m", res.delta_omega_m);
    mb.kv("strength_over_gamma0", res.strength / g0);
    mb.kv("Omega_plus_over_gamma0", cs.Omega_plus / g0);
    mb.kv("Omega_minus_over_gamma0", cs.Omega_minus / g0);
}

void echo_lines(ManifestBuilder& mb, const std::vector<SpectralLine>& lines,
                double g0, double omega_ref) {
    for (const auto& l : lines)
        mb.kv("line", fmt(l.position) + " " +
                          fmt((l.position - omega_ref) / g0) + " " +
                          fmt(l.width / g0) + " " + fmt(l.weight) + " " +
                          to_string(l.kind));
}

std::string csv_header(const std::string& name, const Scenario& sc,
                       const std::string& hash,
                       const std::vector<std::string>& notes,
                       const std::string& columns) {
    std::ostringstream o;
    o << "# " << name << "\n";
    o << "# mode " << to_string(sc.run.mode) << "\n";
    o << "# manifest-hash " << hash << "\n";
    for (const auto& n : notes) o << "# " << n << "\n";
    o << columns << "\n";
    return o.str();
}

std::string trajectory_csv(const std::string& name, const Scenario& sc,
                           const std::string& hash, const Trajectory& tr,
                           double gamma0) {
    std::ostringstream o;
    o << csv_header(name, sc, hash,
                    {"t in units of 1/Gamma0; amplitudes dimensionless"},
                    "t,re_C_A,im_C_A,re_C_B,im_C_B,P_A,P_B,P_L");
    for (size_t i = 0; i < tr.times.size(); ++i) {
        o << fmt(tr.times[i] * gamma0) << ',' << fmt(tr.C_A[i].real()) << ','
          << fmt(tr.C_A[i].imag()) << ',' << fmt(tr.C_B[i].real()) << ','
          << fmt(tr.C_B[i].imag()) << ',' << fmt(tr.P_A[i]) << ','
          << fmt(tr.P_B[i]) << ',' << fmt(tr.P_L[i]) << "\n";
    }
    return o.str();
}

std::string spectrum_csv(const std::string& name, const Scenario& sc,
                         const std::string& hash, const SpectrumResult& sr,
                         double omega_ref, double gamma0) {
    std::ostringstream o;
    const std::string norm_note =
        sc.output.normalization == "figure"
            ? "S in units of 3 omega_tilde_A^3 / (64 pi Gamma0)"
            : "S raw (squared amplitude density)";
    o << csv_header(name, sc, hash,
                    {"omega_S in omega_T; detuning relative to omega_tilde_A",
                     norm_note},
                    "omega_S,detuning_over_gamma0,S");
    for (size_t i = 0; i < sr.omega_S.size(); ++i)
        o << fmt(sr.omega_S[i]) << ','
          << fmt((sr.omega_S[i] - omega_ref) / gamma0) << ',' << fmt(sr.S[i])
          << "\n";
    return o.str();
}

std::string lines_csv(const std::string& name, const Scenario& sc,
                      const std::string& hash,
                      const std::vector<SpectralLine>& lines, double omega_ref,
                      double gamma0) {
    std::ostringstream o;
    o << csv_header(name, sc, hash,
                    {"width is FWHM; weight = 4 h (width/2)^2"},
                    "position,detuning_over_gamma0,width_over_gamma0,weight,kind");
    for (const auto& l : lines)
        o << fmt(l.position) << ',' << fmt((l.position - omega_ref) / gamma0)
          << ',' << fmt(l.width / gamma0) << ',' << fmt(l.weight) << ','
          << to_string(l.kind) << "\n";
    return o.str();
}

// shared row between the rates artifact and sweep tables
const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols = {
        "separation_lambda",      "delta_AB_over_gamma0",
        "gamma_AA_over_gamma0",   "gamma_BB_over_gamma0",
        "gamma_AB_over_gamma0",   "t0_lifetimes",
        "w1_over_gamma0",         "w_over_gamma0",
        "ratio",                  "corrected_ratio",
        "case",                   "line_plus_position",
        "line_minus_position"};
    return cols;
}

std::vector<std::string> summary_row(const AtomPair& pair, const CouplingSet& cs) {
    const double g0 = pair.A.gamma0;
    std::vector<std::string> row;
    row.push_back(fmt((pair.B.position_lambda - pair.A.position_lambda).norm()));
    row.push_back(fmt(cs.delta_AB.real() / g0));
    row.push_back(fmt(cs.gamma(0, 0).real() / g0));
    row.push_back(fmt(cs.gamma(1, 1).real() / g0));
    row.push_back(fmt(cs.gamma(0, 1).real() / g0));
    try {
        const RateReport rr = golden_rule_rate(cs);
        row.push_back(fmt(rr.t0 * g0));
        row.push_back(fmt(rr.w1 / g0));
        row.push_back(fmt(rr.w / g0));
        row.push_back(fmt(rr.ratio));
        row.push_back(fmt(rr.corrected_ratio));
        row.push_back(to_string(rr.label));
    } catch (const std::exception&) {
        for (int i = 0; i < 5; ++i) row.push_back("nan");
        row.push_back("general");
    }
    const double d = cs.delta_AB.real();
    row.push_back(fmt(cs.omega_ref - d));
    row.push_back(fmt(cs.omega_ref + d));
    return row;
}

Trajectory sample_weak(const CouplingSet& cs, const Sampling& s) {
    Trajectory tr;
    for (long i = 0; i <= s.steps; ++i) {
        const double t = std::min(double(i) * s.dt_nat, s.t_max_nat);
        const AmplitudePair a = weak_amplitudes(cs, t);
        tr.push(t, a.C_A, a.C_B);
    }
    return tr;
}

Trajectory sample_strong(const CouplingSet& cs, const ResonanceInfo& res,
                         const Sampling& s) {
    Trajectory tr;
    for (long i = 0; i <= s.steps; ++i) {
        const double t = std::min(double(i) * s.dt_nat, s.t_max_nat);
        const AmplitudePair a = strong_amplitudes(cs, res, t);
        tr.push(t, a.C_A, a.C_B);
    }
    return tr;
}

WeightMode parse_weight_mode(const std::string& s) {
    if (s == "kk") return WeightMode::kk;
    if (s == "pv") return WeightMode::pv_quadrature;
    if (s == "delta") return WeightMode::delta_only;
    throw ConfigError("weight_mode must be kk, pv or delta");
}

void apply_normalization(const Scenario& sc, const EmissionWeights& w,
                         SpectrumResult& sr) {
    if (sc.output.normalization != "raw") return;
    const double nrm = figure_normalization(w);
    for (auto& s : sr.S) s /= nrm;
    for (auto& l : sr.lines) l.weight /= nrm;
}

std::vector<double> spectral_grid(const Scenario& sc, const CouplingSet& cs,
                                  const Tolerances& tol,
                                  const std::vector<SpectralLine>& focus) {
    if (sc.run.omega_min != 0.0 || sc.run.omega_max != 0.0) {
        const int n = sc.run.points > 1 ? sc.run.points : tol.spectrum_grid + 1;
        return linspace(sc.run.omega_min, sc.run.omega_max, n);
    }
    const int n = sc.run.points > 1 ? sc.run.points : tol.spectrum_grid + 1;
    return default_spectrum_grid(cs, n, focus);
}

} // namespace

std::string content_hash(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(text)));
    return std::string(buf, 16);
}

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
    validate_scenario(sc, opt.base_dir);
    std::string tol_name;
    const Tolerances tol = resolve_tolerances(sc, opt, tol_name);
    const Environment env = make_environment(sc, opt.base_dir);
    AtomPair pair = make_atom_pair(sc);
    const double g0 = sc.atoms.gamma0;
    const RunMode mode = sc.run.mode;

    ManifestBuilder mb(sc, tol_name);

    if (sc.run.apply_shift) {
        const double shA = frequency_shift(pair.A, env, tol);
        const double shB = frequency_shift(pair.B, env, tol);
        pair.A.omega_tilde = pair.A.omega - shA;
        pair.B.omega_tilde = pair.B.omega - shB;
        mb.kv("shift_A_over_gamma0", shA / g0);
        mb.kv("shift_B_over_gamma0", shB / g0);
    }

    const bool wants_resonance =
        mode == RunMode::dynamics_strong || mode == RunMode::dynamics_volterra ||
        mode == RunMode::spectrum_strong || mode == RunMode::resonance_scan;

    std::optional<ResonanceInfo> res;
    if (wants_resonance) {
        res = locate_resonance(pair, env, sc, tol);
    } else if (mode == RunMode::spectrum_numeric &&
               sc.geometry.kind == GeometryKind::sphere) {
        try {
            res = locate_resonance(pair, env, sc, tol);
        } catch (const ConvergenceError&) {
            mb.kv("note", "no isolated resonance in the search window; "
                          "running with the damped closed form");
        }
    }

    if (sc.run.tune_resonance && res) {
        const double tuned = tune_to_resonance(pair, env, *res, tol);
        mb.kv("tuned_omega_tilde", tuned);
    }

    const CouplingSet cs = build_coupling_set(pair, env, res, tol);
    echo_coupling(mb, pair, cs);
    if (res) echo_resonance(mb, cs, *res, g0);

    RunResult out;
    const std::string& prefix = sc.output.prefix;

    // data artifacts are rendered after the manifest core is final, so the
    // resolved-parameter hash can be stamped into each file
    std::vector<std::function<Artifact(const std::string&)>> renderers;

    switch (mode) {
    case RunMode::dynamics_weak: {
        const Sampling s = make_sampling(sc.run.t_max, sc.run.dt, g0);
        Trajectory tr = sample_weak(cs, s);
        renderers.push_back([&, tr](const std::string& hash) {
            const std::string name = prefix + "_dynamics.csv";
            return Artifact{name, trajectory_csv(name, sc, hash, tr, g0)};
        });
        break;
    }
    case RunMode::dynamics_strong: {
        const StrongSolution sol = classify_strong(cs, *res);
        mb.kv("branch", sol.branch > 0 ? "+1" : "-1");
        mb.kv("Omega_over_gamma0", sol.Omega / g0);
        mb.kv("Gamma_other_over_gamma0", sol.Gamma_other / g0);
        mb.kv("residual_detuning_over_width", sol.detuning / res->delta_omega_m);
        mb.kv("narrow_line", fmt(sol.narrow_line));
        const Sampling s = make_sampling(sc.run.t_max, sc.run.dt, g0);
        Trajectory tr = sample_strong(cs, *res, s);
        renderers.push_back([&, tr](const std::string& hash) {
            const std::string name = prefix + "_dynamics.csv";
            return Artifact{name, trajectory_csv(name, sc, hash, tr, g0)};
        });
        break;
    }
    case RunMode::dynamics_volterra: {
        const double gaa_m = rate_probe(pair.A, env, res->omega_m, tol);
        const double gab_m =
            gamma_coupling(at_frequency(pair.A, res->omega_m),
                           at_frequency(pair.B, res->omega_m), env, tol)
                .real();
        mb.kv("kernel_line_AA_over_gamma0", gaa_m / g0);
        mb.kv("kernel_line_AB_over_gamma0", gab_m / g0);
        KernelSpec spec;
        spec.lines_AA = {{res->omega_m, res->delta_omega_m, gaa_m}};
        spec.lines_AB = {{res->omega_m, res->delta_omega_m, gab_m}};
        const Sampling s = make_sampling(sc.run.t_max, sc.run.dt, g0);
        Trajectory tr = volterra_solve(spec, cs, s.t_max_nat, s.dt_nat);
        renderers.push_back([&, tr](const std::string& hash) {
            const std::string name = prefix + "_dynamics.csv";
            return Artifact{name, trajectory_csv(name, sc, hash, tr, g0)};
        });
        break;
    }
    case RunMode::rates: {
        renderers.push_back([&](const std::string& hash) {
            const std::string name = prefix + "_rates.csv";
            std::ostringstream cols;
            const auto& cn = summary_columns();
            for (size_t i = 0; i < cn.size(); ++i)
                cols << (i ? "," : "") << cn[i];
            std::ostringstream o;
            o << csv_header(name, sc, hash,
                            {"rates relative to Gamma0; t0 in 1/Gamma0"},
                            cols.str());
            const auto row = summary_row(pair, cs);
            for (size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << row[i];
            o << "\n";
            return Artifact{name, o.str()};
        });
        break;
    }
    case RunMode::spectrum_weak:
    case RunMode::spectrum_strong:
    case RunMode::spectrum_numeric: {
        const WeightMode wm = parse_weight_mode(sc.run.weight_mode);
        mb.kv("weight_mode", sc.run.weight_mode);
        const EmissionWeights w =
            make_weights(pair, sc.detector.position, env, cs, res, wm, tol);
        mb.kv("F_A_norm", w.F_A.norm());
        mb.kv("F_B_norm", w.F_B.norm());
        if (res) {
            mb.kv("W_A_norm", w.W_A.norm());
            mb.kv("W_B_norm", w.W_B.norm());
        }

        // closed-form lines steer the grid refinement
        bool use_strong = false;
        if (mode != RunMode::spectrum_weak && res) {
            try {
                classify_strong(cs, *res);
                use_strong = true;
            } catch (const RegimeError&) {
                if (mode == RunMode::spectrum_strong) throw;
            }
        }
        const double ref = cs.omega_ref;
        auto closed_on = [&](const std::vector<double>& grid) {
            return use_strong ? strong_spectrum(cs, *res, w, grid)
                              : weak_spectrum(cs, w, grid);
        };
        const std::vector<double> probe = {ref * (1.0 - 1e-3), ref,
                                           ref * (1.0 + 1e-3)};
        const std::vector<SpectralLine> focus = closed_on(probe).lines;
        const std::vector<double> grid = spectral_grid(sc, cs, tol, focus);

        SpectrumResult sr;
        if (mode == RunMode::spectrum_numeric) {
            const double T_nat = sc.run.observation_time / g0;
            const double horizon = std::max(sc.run.t_max, sc.run.observation_time);
            const Sampling s = make_sampling(horizon, sc.run.dt, g0);
            Trajectory tr = use_strong ? sample_strong(cs, *res, s)
                                       : sample_weak(cs, s);
            sr = finite_time_spectrum(tr, w, grid, T_nat);
            mb.kv("observation_time_lifetimes", sc.run.observation_time);
            mb.kv("truncated", fmt(sr.truncated));
            if (use_strong)
                mb.kv("note",
                      "finite-window pair lines carry the excitation stored in "
                      "the field mode and exceed the stationary closed form");
        } else {
            sr = closed_on(grid);
        }
        apply_normalization(sc, w, sr);
        echo_lines(mb, sr.lines, g0, ref);

        renderers.push_back([&, sr](const std::string& hash) {
            const std::string name = prefix + "_spectrum.csv";
            return Artifact{name, spectrum_csv(name, sc, hash, sr, ref, g0)};
        });
        renderers.push_back([&, sr](const std::string& hash) {
            const std::string name = prefix + "_lines.csv";
            return Artifact{name, lines_csv(name, sc, hash, sr.lines, ref, g0)};
        });
        break;
    }
    case RunMode::resonance_scan: {
        double lo = sc.run.resonance_lo, hi = sc.run.resonance_hi;
        if (sc.run.omega_min != 0.0 || sc.run.omega_max != 0.0) {
            lo = sc.run.omega_min;
            hi = sc.run.omega_max;
        }
        const int n = sc.run.points > 1 ? sc.run.points : 801;
        const std::vector<double> grid = linspace(lo, hi, n);
        std::vector<double> gaa(n), gab(n);
        parallel_for(n, opt.threads, [&](int i) {
            gaa[i] = rate_probe(pair.A, env, grid[i], tol) / g0;
            gab[i] = gamma_coupling(at_frequency(pair.A, grid[i]),
                                    at_frequency(pair.B, grid[i]), env, tol)
                         .real() /
                     g0;
        });
        renderers.push_back([&, grid, gaa, gab](const std::string& hash) {
            const std::string name = prefix + "_scan.csv";
            std::ostringstream o;
            o << csv_header(name, sc, hash, {"rates relative to Gamma0"},
                            "omega,gamma_AA_over_gamma0,gamma_AB_over_gamma0");
            for (int i = 0; i < n; ++i)
                o << fmt(grid[i]) << ',' << fmt(gaa[i]) << ',' << fmt(gab[i])
                  << "\n";
            return Artifact{name, o.str()};
        });
        break;
    }
    }

    const std::string core = mb.core();
    const std::string hash = content_hash(core);
    out.manifest_hash = hash;
    for (auto& render : renderers) out.files.push_back(render(hash));

    std::ostringstream files;
    files << "files {\n";
    for (const auto& f : out.files)
        files << "  " << f.name << " " << content_hash(f.content) << "\n";
    files << "}\n";
    out.files.push_back({prefix + "_manifest.txt", core + files.str()});
    return out;
}

void write_artifacts(const RunResult& res, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& f : res.files) {
        const auto path = std::filesystem::path(out_dir) / f.name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path.string());
        out << f.content;
    }
}

SweepResult sweep(const Scenario& sc, const std::string& parameter_path,
                  const std::vector<double>& values, const RunOptions& opt) {
    // resolve the path before doing any work so typos fail fast
    {
        Scenario probe = sc;
        set_sweep_parameter(probe, parameter_path,
                            values.empty() ? 1.0 : values.front());
    }
    SweepResult table;
    table.parameter = parameter_path;
    table.columns.push_back(parameter_path);
    for (const auto& c : summary_columns()) table.columns.push_back(c);
    table.rows.resize(values.size());

    std::string tol_name;
    const Tolerances tol = resolve_tolerances(sc, opt, tol_name);

    parallel_for(static_cast<int>(values.size()), opt.threads, [&](int i) {
        Scenario point = sc;
        set_sweep_parameter(point, parameter_path, values[i]);
        validate_scenario(point, opt.base_dir);
        const Environment env = make_environment(point, opt.base_dir);
        AtomPair pair = make_atom_pair(point);
        if (point.run.apply_shift) {
            pair.A.omega_tilde = pair.A.omega - frequency_shift(pair.A, env, tol);
            pair.B.omega_tilde = pair.B.omega - frequency_shift(pair.B, env, tol);
        }
        const CouplingSet cs = build_coupling_set(pair, env, {}, tol);
        std::vector<std::string> row;
        row.push_back(fmt(values[i]));
        for (auto& cell : summary_row(pair, cs)) row.push_back(std::move(cell));
        table.rows[i] = std::move(row);
    });
    return table;
}

std::string sweep_csv(const SweepResult& table) {
    std::ostringstream o;
    o << "# sweep over " << table.parameter << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        o << (i ? "," : "") << table.columns[i];
    o << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << row[i];
        o << "\n";
    }
    return o.str();
}

} // namespace rddi
