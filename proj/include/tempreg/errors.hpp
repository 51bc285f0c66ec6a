#pragma once

#include <stdexcept>
#include <string>

namespace tempreg {

/// Iterative solver failed to reach the requested tolerance. Usually means
/// the input chain is not ergodic or mixes too slowly for the iteration cap.
struct NonConvergenceError : std::runtime_error {
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A stationary probability is (numerically) zero where a division by it is required.
struct ZeroMassError : std::runtime_error {
    explicit ZeroMassError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// A linear system that should be well posed came back singular. Reported
/// defensively; cannot occur for gamma < 1 and a row-stochastic transition matrix.
struct SingularSystemError : std::runtime_error {
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// A sampled trajectory did not visit enough distinct states within the step budget.
struct TrajectoryTooShortError : std::runtime_error {
    explicit TrajectoryTooShortError(const std::string& what) : std::runtime_error(what) {}
};

/// An online learner's parameter left the plausible range (step size too large).
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tempreg
