#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace gptr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Invalid arguments: dimension mismatches, out-of-range parameters.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Linear-algebra breakdowns (e.g. a covariance factorization that fails
/// even after the jitter ladder has been exhausted).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hyperparameter training produced no finite likelihood.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A plant evaluation failed; carries the iterate at which it happened.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, Vector at)
        : std::runtime_error(what), iterate(std::move(at)) {}
    Vector iterate;
};

/// A local-model sample set stayed ill-conditioned after the redraw budget.
class PoisednessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ArgumentError(msg);
}

}  // namespace gptr
