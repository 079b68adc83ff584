#pragma once

#include <stdexcept>
#include <string>

namespace saccadelab {

/// Malformed or truncated file contents. Messages carry the location
/// (line number or byte offset) of the first offending byte.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parse failure in a text input (CSV, manifest, config).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape mismatch between tensors or maps.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Invalid model or run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rejection sampling exhausted its attempt budget.
struct SamplingError : std::runtime_error {
    explicit SamplingError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A metric was asked for data the input does not carry (durations,
/// target boxes).
struct UnsupportedDataError : std::runtime_error {
    explicit UnsupportedDataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace saccadelab
