// errors.hpp
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ofi {

/// Bad argument or violated precondition.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Source could not be opened, read, or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input bytes do not follow the documented file format.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Regressor matrix is rank deficient.
struct CollinearityError : std::runtime_error {
    CollinearityError(const std::string& what, std::vector<std::string> cols)
        : std::runtime_error(what), columns(std::move(cols)) {}
    std::vector<std::string> columns;
};

/// Not enough observations for the requested estimate.
struct SampleSizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An estimation stage cannot proceed on the supplied data.
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fatal configuration problem for a pipeline run.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ofi
