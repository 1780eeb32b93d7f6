#pragma once

#include <stdexcept>
#include <string>

namespace placenames {

// Configuration / I-O problems: bad manifest, missing file, invalid option.
// CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Data-level problems discovered while processing valid inputs.
// CLI maps these to exit code 1.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// API contract violations (caller bugs).
struct ContractError : std::logic_error {
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// SMOTE/ENN failure modes the pipeline is allowed to recover from.
struct ResampleError : DataError {
    explicit ResampleError(const std::string& what) : DataError(what) {}
};

}  // namespace placenames
