#pragma once

#include <stdexcept>
#include <string>

namespace lanelab {

/// Bad argument or violated type invariant.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unreadable/unwritable files, malformed inputs, frame size mismatch.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lanelab
