#pragma once
#include <string>
#include <vector>
#include "rddi/scenario.hpp"

namespace rddi {

// Built-in scenarios: the three weak-coupling spectrum curves and the three
// strong-coupling spectrum cases for the 20 lambda_T microsphere, plus small
// free-space and bulk-medium pair setups used as sweep bases.
std::vector<std::string> preset_names();

// ConfigError listing the valid names when `name` is unknown.
Scenario make_preset(const std::string& name);

} // namespace rddi
