#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include "rddi/errors.hpp"
#include "rddi/presets.hpp"
#include "rddi/runner.hpp"
#include "rddi/scenario.hpp"
#include "rddi/selftest.hpp"
#include "rddi/version.hpp"

namespace {

using namespace rddi;

// --values accepts "a,b,c", "lo:hi:n" (linear) or "lo:hi:n:log"
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> part;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t next = text.find(':', pos);
            part.push_back(text.substr(pos, next - pos));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (part.size() != 3 && !(part.size() == 4 && part[3] == "log"))
            throw ConfigError("--values range must be lo:hi:n or lo:hi:n:log");
        const double lo = std::stod(part[0]), hi = std::stod(part[1]);
        const long n = std::stol(part[2]);
        if (n < 1) throw ConfigError("--values range needs n >= 1");
        const bool log = part.size() == 4;
        if (log && (lo <= 0.0 || hi <= 0.0))
            throw ConfigError("--values log range needs positive endpoints");
        for (long i = 0; i < n; ++i) {
            const double u = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            out.push_back(log ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u);
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find(',', pos);
        const std::string tok = text.substr(pos, next - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (out.empty()) throw ConfigError("--values is empty");
    return out;
}

Scenario load_checked(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw ConfigError("scenario file not found: " + path);
    return load_scenario(path);
}

std::string write_one(const std::filesystem::path& dir, const std::string& name,
                      const std::string& content) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    return path.string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-atom dipole-dipole and atom-field dynamics near "
                 "dispersing, absorbing bodies"};
    app.set_version_flag("--version", std::string("rddi ") + library_version);
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand arguments

    std::string out_dir = ".";
    int threads = 1;
    std::string profile;
    app.add_option("--out-dir", out_dir, "directory for written artifacts")
        ->capture_default_str();
    app.add_option("--threads", threads, "worker threads for sweeps and scans")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--tolerance-profile", profile,
                   "override the scenario's tolerance profile")
        ->check(CLI::IsMember({"fast", "paper"}));

    auto* cmd_run = app.add_subcommand("run", "run one scenario file");
    std::string run_path;
    cmd_run->add_option("scenario", run_path, "scenario file")->required();

    auto* cmd_sweep =
        app.add_subcommand("sweep", "re-evaluate the coupling summary while "
                                    "one parameter varies");
    std::string sweep_path, sweep_param, sweep_values;
    cmd_sweep->add_option("scenario", sweep_path, "scenario file")->required();
    cmd_sweep->add_option("--param", sweep_param, "parameter path, e.g. atoms.separation")
        ->required();
    cmd_sweep
        ->add_option("--values", sweep_values,
                     "comma list, lo:hi:n, or lo:hi:n:log")
        ->required();

    auto* cmd_preset =
        app.add_subcommand("preset", "write a built-in scenario file ('list' "
                                     "prints the available names)");
    std::string preset_name;
    cmd_preset->add_option("name", preset_name, "preset name or 'list'")->required();

    auto* cmd_selftest =
        app.add_subcommand("self-test", "run the built-in verification suite");
    bool light = false, inject_fault = false;
    std::string presets_dir = "presets";
    cmd_selftest->add_flag("--light", light,
                           "skip the minute-scale microsphere checks");
    cmd_selftest->add_flag(
        "--inject-fault", inject_fault,
        "conjugate the sphere permittivity; the resonance check must fail");
    cmd_selftest->add_option("--presets-dir", presets_dir,
                             "directory holding the shipped preset files")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunOptions ro;
        ro.threads = threads;
        ro.tolerance_profile = profile;

        if (*cmd_run) {
            ro.base_dir = std::filesystem::path(run_path).parent_path().string();
            const RunResult res = run_scenario(load_checked(run_path), ro);
            write_artifacts(res, out_dir);
            for (const auto& a : res.files)
                std::cout << (std::filesystem::path(out_dir) / a.name).string()
                          << "\n";
            std::cout << "manifest-hash " << res.manifest_hash << "\n";
        } else if (*cmd_sweep) {
            ro.base_dir = std::filesystem::path(sweep_path).parent_path().string();
            const Scenario sc = load_checked(sweep_path);
            const SweepResult table =
                sweep(sc, sweep_param, parse_values(sweep_values), ro);
            const std::string name = sc.output.prefix + "_sweep.csv";
            std::cout << write_one(out_dir, name, sweep_csv(table)) << "\n";
        } else if (*cmd_preset) {
            if (preset_name == "list") {
                for (const auto& n : preset_names()) std::cout << n << "\n";
                return 0;
            }
            const Scenario sc = make_preset(preset_name);
            std::cout << write_one(out_dir, preset_name + ".scn",
                                   serialize_scenario(sc))
                      << "\n";
        } else if (*cmd_selftest) {
            SelfTestOptions o;
            o.fast = profile != "paper";
            o.heavy = !light;
            o.fault = inject_fault ? FaultInjection::sphere_eps_sign
                                   : FaultInjection::none;
            o.presets_dir = presets_dir;
            o.progress = [](const CheckResult& r) {
                const char* tag = r.status == CheckStatus::pass   ? "PASS"
                                  : r.status == CheckStatus::fail ? "FAIL"
                                                                  : "SKIP";
                std::cout << tag << " " << r.name << " " << r.detail << std::endl;
            };
            const SelfTestReport report = self_test(o);
            int passed = 0, failed = 0, skipped = 0;
            for (const auto& c : report.checks)
                (c.status == CheckStatus::pass   ? passed
                 : c.status == CheckStatus::fail ? failed
                                                 : skipped)++;
            std::cout << "self-test: " << passed << " passed, " << failed
                      << " failed, " << skipped << " skipped\n";
            return report.all_passed() ? 0 : 1;
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
