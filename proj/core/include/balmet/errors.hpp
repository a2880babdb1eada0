// errors.hpp - exception types for numerical failure modes
#pragma once

#include <stdexcept>
#include <string>

namespace balmet {

// Quadrature self-test failed at the declared degree bound.
struct ResolutionTooLowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Gram/inner-product matrix lost positivity (quadrature under-resolution).
struct RankDeficiencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sections fail to generate a fibre: S(p) S(p)^* singular at some point.
struct BasePointFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A metric field violated Hermitian positive-definiteness (or its condition
// number exceeded the degeneracy guard).
struct PositivityLossError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stencil output was NaN/Inf.
struct NonFiniteDerivativeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Explicit time step diverged (parabolic stability bound violated).
struct CflViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plain Euler step would leave the positive cone.
struct StepRejectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Poisson solve could not represent the right-hand side.
struct SolverNonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace balmet
