#pragma once

#include <stdexcept>
#include <string>

namespace fibrevt {

/// Invalid or non-finite input parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// RSA could not find an admissible position for a fibre.
class JammingError : public std::runtime_error {
public:
    JammingError(const std::string& what, double achieved_vf)
        : std::runtime_error(what), achieved_vf_(achieved_vf) {}
    double achieved_vf() const noexcept { return achieved_vf_; }

private:
    double achieved_vf_;
};

/// Mesh too coarse for the requested element size.
class ResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values produced during assembly.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, int element)
        : std::runtime_error(what), element_(element) {}
    int element() const noexcept { return element_; }

private:
    int element_;
};

/// Constrained stiffness is singular (e.g. missing boundary conditions).
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newton did not converge within the iteration limit; the caller should cut back.
class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(const std::string& what, int iterations)
        : std::runtime_error(what), iterations_(iterations) {}
    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

/// The stress-strain curve never crosses the offset line.
class NotYieldedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration file or value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fibrevt
