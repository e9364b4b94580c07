#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sfols {

// Weight vector failed validation; carries the offending vector.
class WeightError : public std::invalid_argument {
public:
    WeightError(const std::string& msg, Eigen::VectorXd w)
        : std::invalid_argument(msg), offending(std::move(w)) {}
    Eigen::VectorXd offending;
};

class NegativeComponentError : public WeightError {
public:
    using WeightError::WeightError;
};

class SumNotOneError : public WeightError {
public:
    using WeightError::WeightError;
};

class DimensionMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation that needs at least one element was handed an empty set.
class EmptySetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative solver failed to reach its tolerance within the sweep budget.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Internal numerical failure (ill-conditioned pivot, broken invariant).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sfols
