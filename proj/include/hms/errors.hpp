#pragma once

#include <stdexcept>
#include <string>

namespace hms {

// Scenario/config document failed validation. The CLI maps this to exit
// code 1; everything else thrown by the modules maps to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Calibration targets cannot be realized (e.g. solved inductance <= 0).
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Codebook phase coverage is insufficient for the requested operation.
struct CoverageError : std::runtime_error {
    explicit CoverageError(const std::string& msg) : std::runtime_error(msg) {}
};

// A simulation scenario is internally inconsistent (e.g. non-overlapping
// satellite passes in a handover).
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hms
