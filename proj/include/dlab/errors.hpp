#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

// Base of every error raised by the library. The CLI maps each subclass to
// an exit code (see src/runner.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. m >= 1 for K(m)).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid physical/model parameters (ordering of levels, zero wavenumber, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Mismatched grid sizes or representations.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Configuration file problems. `line` is 0 when not tied to a specific line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Numerical failure during time stepping; carries the last time at which the
/// state was still valid.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double last_good_time)
        : Error(what + " (last good t=" + std::to_string(last_good_time) + ")"),
          last_good_time_(last_good_time) {}
    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

class BlowUpError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResolutionLossError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DriftError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dlab
