#ifndef TCLOCK_ERRORS_HPP
#define TCLOCK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tclock {

/// Base for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Physically invalid input (negative velocity, region outside window, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (non-power-of-two grid, too few slices, unknown keys).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: non-convergent derivative, overflow guard, instability,
/// degenerate statistics.
class NumericsError : public Error {
public:
    using Error::Error;
};

/// Fit or calibration loop failed (no bracket, no crossing, non-convergence).
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace tclock

#endif
