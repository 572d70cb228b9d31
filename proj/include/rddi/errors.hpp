#pragma once
#include <stdexcept>
#include <string>

namespace rddi {

// Error taxonomy mapped to CLI exit codes:
//   ConfigError      -> 2  (bad scenario / invalid input)
//   RegimeError      -> 3  (operation not applicable in this coupling regime)
//   ConvergenceError -> 4  (series / quadrature / search failed to converge)

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeometryError : ConfigError {
    explicit GeometryError(const std::string& msg) : ConfigError(msg) {}
};

struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rddi
