#pragma once
#include <string>
#include <vector>
#include "rddi/scenario.hpp"

namespace rddi {

// In-memory artifact: run_scenario computes everything deterministically,
// write_artifacts serialises to disk afterwards.  Same scenario + tolerances
// -> byte-identical contents.
struct Artifact {
    std::string name;    // file name (no directory)
    std::string content;
};

struct RunOptions {
    int threads = 1;                // parallelism across independent points
    std::string tolerance_profile;  // "fast" | "paper"; empty: scenario's pick
    std::string base_dir;           // anchors relative paths in the scenario
};

struct RunResult {
    std::vector<Artifact> files; // data files first, manifest last
    std::string manifest_hash;   // FNV-1a 64 of the resolved-parameter text
};

RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

// Serialised writes into out_dir (created if missing).
void write_artifacts(const RunResult& res, const std::string& out_dir);

// One row per value of the swept parameter with the pair-coupling summary:
// shift, rate matrix, transfer rates and doublet line positions.  Cells that
// do not apply in the regime at hand hold "nan".
struct SweepResult {
    std::string parameter;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

SweepResult sweep(const Scenario& sc, const std::string& parameter_path,
                  const std::vector<double>& values, const RunOptions& opt = {});

std::string sweep_csv(const SweepResult& table);

// FNV-1a 64-bit, hex-encoded; the hash stamped into every artifact header.
std::string content_hash(const std::string& text);

} // namespace rddi
