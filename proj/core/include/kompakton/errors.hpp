#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace kompakton {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Individually valid parameters that do not fit together (e.g. a compacton
/// that does not fit inside the periodic domain).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// The periodic banded system is singular to working precision.
class LinearSolveError : public Error {
public:
    using Error::Error;
};

/// A field contains non-finite values or exceeded the blow-up bound.
class BlowupError : public Error {
public:
    using Error::Error;
};

/// A regression or measurement has too few usable points.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration. `key` and `line` point
/// at the offending entry; line is 0 when the problem is not tied to one line
/// (e.g. a missing key).
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::string key, std::size_t line)
        : Error(message), key_(std::move(key)), line_(line) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

/// Filesystem or stream failure; the message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace kompakton
