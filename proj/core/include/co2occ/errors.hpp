#ifndef CO2OCC_ERRORS_HPP
#define CO2OCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace co2occ {

/// Bad CLI usage or inconsistent configuration. Maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or invariant-violating input data. Maps to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (singular system, non-finite result). Maps to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace co2occ

#endif
