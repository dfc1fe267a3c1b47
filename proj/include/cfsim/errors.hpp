#pragma once

#include <stdexcept>
#include <string>

namespace cfsim {

// Invalid device/tone/run configuration (bad dimensions, missing units, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A dressed-state label required by an operation is missing or ambiguous.
struct LabelError : std::runtime_error {
    explicit LabelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Propagation accuracy failure (unitarity drift beyond tolerance).
struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Curve fit did not converge or the data does not support the model.
struct FitError : std::runtime_error {
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Gate-angle extraction is unreliable (too much population left the subspace).
struct ExtractionError : std::runtime_error {
    explicit ExtractionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cfsim
