#pragma once
#include <functional>
#include <string>
#include <vector>
#include "rddi/units.hpp"

namespace rddi {

// Built-in verification: rate-law ratios, transfer-time constants, trapping
// fractions, the microsphere resonance numbers, strong-coupling splittings,
// oracle equivalences, the Green-tensor invariant suite, distance laws, and
// preset round-trips.  Failures are report entries, never exceptions.

enum class CheckStatus { pass, fail, skip };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skip;
    std::string detail;
};

enum class FaultInjection {
    none,
    sphere_eps_sign, // conjugated sphere permittivity (negative absorption)
};

struct SelfTestOptions {
    bool fast = true;   // fast tolerance profile
    bool heavy = true;  // include the minute-scale microsphere checks
    FaultInjection fault = FaultInjection::none;
    std::string presets_dir = "presets";
    std::function<void(const CheckResult&)> progress; // streamed per check
};

struct SelfTestReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

SelfTestReport self_test(const SelfTestOptions& opt = {});

// One "STATUS name detail" line per check plus a tally line.
std::string format_report(const SelfTestReport& report);

} // namespace rddi
