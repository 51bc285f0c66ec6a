#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "tempreg/errors.hpp"

namespace tempreg {

/**
 * Square row-stochastic transition matrix. Row i holds the distribution of
 * the next state given state i. Construction validates entries in [0, 1]
 * and row sums equal to 1 within 1e-12.
 */
class StochasticMatrix {
public:
    explicit StochasticMatrix(Eigen::MatrixXd entries);

    int size() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Eigen::MatrixXd m_;
};

/**
 * Probability vector mu with mu * M = mu for its source matrix M.
 * Construction validates nonnegativity and unit sum within 1e-12.
 */
class StationaryDistribution {
public:
    explicit StationaryDistribution(Eigen::VectorXd probs);

    int size() const { return static_cast<int>(p_.size()); }
    const Eigen::VectorXd& probs() const { return p_; }
    double operator[](int i) const { return p_(i); }

private:
    Eigen::VectorXd p_;
};

/**
 * Stationary distribution of an ergodic chain.
 *
 * Power iteration from the uniform vector until ||mu M - mu||_1 <= tol; on
 * failure (periodic or very slowly mixing input) falls back to a direct
 * least-squares solve of (M^T - I) mu = 0 with sum(mu) = 1. Throws
 * NonConvergenceError if neither route meets the tolerance.
 */
StationaryDistribution stationary_distribution(const StochasticMatrix& m, double tol = 1e-12,
                                               int max_iters = 100000);

/// Power-iteration route only; exposed for tests of the fallback path.
StationaryDistribution stationary_distribution_power(const StochasticMatrix& m, double tol,
                                                     int max_iters);

/**
 * Time-reversed chain: result(i, j) = mu_j * m(j, i) / mu_i. Rows are
 * renormalized to absorb the residual of the stationary solve; the reversal
 * shares the stationary distribution of m. Throws ZeroMassError when some
 * mu_i <= 1e-15.
 */
StochasticMatrix reversal(const StochasticMatrix& m, const StationaryDistribution& mu);

/// Detailed balance test: |mu_i m(i,j) - mu_j m(j,i)| <= tol for all pairs.
bool is_reversible(const StochasticMatrix& m, const StationaryDistribution& mu, double tol = 1e-12);

/// Convex combination (1 - beta) * p + beta * p_rev; row-stochastic for beta in [0, 1].
StochasticMatrix mix(const StochasticMatrix& p, const StochasticMatrix& p_rev, double beta);

struct MixingCurve {
    std::vector<double> max_abs;    // element k: max |M^(k+1) - P_inf|
    std::vector<double> frobenius;  // same distances in Frobenius norm
};

/**
 * Distance of successive matrix powers to the rank-one limit P_inf whose
 * every row is mu. Element k of each curve is the distance of m^(k+1).
 */
MixingCurve mixing_error_curves(const StochasticMatrix& m, const StationaryDistribution& mu,
                                int iters);

/// Max-abs curve only (the primary distance used by the mixing experiment).
std::vector<double> mixing_error_curve(const StochasticMatrix& m, const StationaryDistribution& mu,
                                       int iters);

/// Plain-text serialization: first line n, then n rows of n decimals
/// written with 17 significant digits (exact round trip).
void write_matrix(std::ostream& out, const StochasticMatrix& m);
StochasticMatrix read_matrix(std::istream& in);

}  // namespace tempreg
