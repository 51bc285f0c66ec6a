#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "tempreg/markov.hpp"
#include "tempreg/rng.hpp"

namespace tempreg {

/**
 * Tabular MDP under a fixed policy: the policy-induced transition chain, a
 * state-indexed reward vector r(s), and a discount gamma in [0, 1).
 */
class TabularMdp {
public:
    TabularMdp(StochasticMatrix transition, Eigen::VectorXd reward, double gamma);

    int n_states() const { return transition_.size(); }
    const StochasticMatrix& transition() const { return transition_; }
    const Eigen::VectorXd& reward() const { return reward_; }
    double gamma() const { return gamma_; }

private:
    StochasticMatrix transition_;
    Eigen::VectorXd reward_;
    double gamma_;
};

/// Vector of state values.
struct ValueFunction {
    Eigen::VectorXd values;

    ValueFunction() = default;
    explicit ValueFunction(Eigen::VectorXd v) : values(std::move(v)) {}
    static ValueFunction zeros(int n) { return ValueFunction(Eigen::VectorXd::Zero(n)); }
    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values(i); }
};

/// One Bellman evaluation step: r + gamma * P * v.
ValueFunction bellman_apply(const TabularMdp& mdp, const ValueFunction& v);

/// Fixed point of the evaluation operator via a direct solve of (I - gamma P) v = r.
ValueFunction solve_exact(const TabularMdp& mdp);

/**
 * Samples a chain trajectory of steps transitions. Row t of the result is
 * (s_t, r(s_t)); the returned vector has steps + 1 entries.
 */
std::vector<std::pair<int, double>> sample_trajectory(const TabularMdp& mdp, int start, int steps,
                                                      RngStream& rng);

/// Samples the next state from the row of the current state.
int sample_transition(const StochasticMatrix& m, int state, RngStream& rng);

/// Text format: n_states, gamma, reward row, then the transition matrix
/// in the markov-core matrix format.
void write_mdp(std::ostream& out, const TabularMdp& mdp);
TabularMdp read_mdp(std::istream& in);

}  // namespace tempreg
