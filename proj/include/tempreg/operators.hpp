#pragma once

#include <vector>

#include "tempreg/markov.hpp"
#include "tempreg/mdp.hpp"

namespace tempreg {

enum class RegularizerKind { None, PreviousState, ExponentialSmoothing };

/**
 * Temporal-regularization settings. beta in [0, 1] weighs the backward
 * bootstrap term; lambda in [0, 1) controls the exponential smoothing of
 * past states (only for ExponentialSmoothing); beta_decay is a per-step
 * decrement applied by the online learners, never by exact solves.
 */
struct RegularizerSpec {
    RegularizerKind kind = RegularizerKind::None;
    double beta = 0.0;
    double lambda = 0.0;
    double beta_decay = 0.0;

    static RegularizerSpec none() { return {}; }
    static RegularizerSpec previous_state(double beta, double beta_decay = 0.0) {
        return {RegularizerKind::PreviousState, beta, 0.0, beta_decay};
    }
    static RegularizerSpec exponential_smoothing(double beta, double lambda,
                                                 double beta_decay = 0.0) {
        return {RegularizerKind::ExponentialSmoothing, beta, lambda, beta_decay};
    }

    /// beta with kind None collapsed to 0.
    double effective_beta() const { return kind == RegularizerKind::None ? 0.0 : beta; }

    void validate() const;
};

/**
 * The single stochastic matrix M such that the regularized operator is
 * v -> r + gamma * M * v:
 *   None:                 P
 *   PreviousState:        (1 - beta) P + beta P~
 *   ExponentialSmoothing: (1 - beta) P + beta (1 - lambda) P~ (I - lambda P~)^-1
 * The smoothing series is evaluated in closed form through the resolvent.
 */
StochasticMatrix effective_matrix(const StochasticMatrix& p, const StochasticMatrix& p_rev,
                                  const RegularizerSpec& spec);

/// One application of the temporally regularized Bellman operator.
ValueFunction regularized_apply(const TabularMdp& mdp, const StochasticMatrix& p_rev,
                                const RegularizerSpec& spec, const ValueFunction& v);

/// Fixed point of the regularized operator via (I - gamma M) v = r.
ValueFunction regularized_solve(const TabularMdp& mdp, const StochasticMatrix& p_rev,
                                const RegularizerSpec& spec);

/**
 * Certified upper bound on ||v - v_beta||_inf: the truncated series
 * sum_i gamma^i ||(P^i - M^i) r||_inf plus the geometric tail
 * 2 gamma^T ||r||_inf / (1 - gamma), so the result stays an upper bound
 * for any truncation T >= 1.
 */
double bias_bound(const TabularMdp& mdp, const StochasticMatrix& p_rev,
                  const RegularizerSpec& spec, int truncation);

struct AverageReward {
    double per_step;    // mu . r
    double discounted;  // mu . r / (1 - gamma)
};

/// Stationary average reward and its discounted accumulation.
AverageReward average_reward(const StationaryDistribution& mu, const Eigen::VectorXd& reward,
                             double gamma);

/**
 * The first n_terms weights the regularizer places on its bootstrap terms
 * (the forward value first, then successive backward terms). The full
 * sequence sums to 1; regularizer_weight_total adds the analytic remainder
 * of the truncated sequence.
 */
std::vector<double> regularizer_weights(const RegularizerSpec& spec, int n_terms);
double regularizer_weight_total(const RegularizerSpec& spec, int n_terms);

}  // namespace tempreg
