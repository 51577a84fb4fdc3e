#pragma once

#include <stdexcept>
#include <string>

namespace nhssh {

// Base class for all domain errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A LatticeSpec (or other input) violates its invariants.
class InvalidSpecError : public Error {
public:
    explicit InvalidSpecError(const std::string& what) : Error(what) {}
};

// The eigensolver failed to converge within its iteration budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, long iterations)
        : Error(what), iterations_(iterations) {}
    long iterations() const noexcept { return iterations_; }

private:
    long iterations_;
};

// Mode classification could not single out the zero mode.
class ClassificationError : public Error {
public:
    explicit ClassificationError(const std::string& what) : Error(what) {}
};

// No eigenvector coalescence found inside the requested bracket.
class NoExceptionalPointError : public Error {
public:
    explicit NoExceptionalPointError(const std::string& what) : Error(what) {}
};

// Backward recursion produced amplitudes inconsistent with a localized mode.
class RecursionBlowupError : public Error {
public:
    explicit RecursionBlowupError(const std::string& what) : Error(what) {}
};

// Integrator step size violates the stability bound, or the integration diverged.
class StepSizeError : public Error {
public:
    explicit StepSizeError(const std::string& what) : Error(what) {}
};

// Eigen-expansion propagation requested for a near-defective Hamiltonian.
class NearDefectiveError : public Error {
public:
    explicit NearDefectiveError(const std::string& what) : Error(what) {}
};

} // namespace nhssh
