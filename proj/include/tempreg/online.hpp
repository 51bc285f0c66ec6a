#pragma once

#include <cstdint>
#include <functional>

#include "tempreg/envs.hpp"
#include "tempreg/mdp.hpp"
#include "tempreg/operators.hpp"

namespace tempreg {

/**
 * Settings shared by the sample-based learners. With alpha_decay the
 * per-state step size is alpha / (1 + visits(s)); otherwise alpha is
 * constant. Episodes restart from start_state (uniformly random when -1)
 * and end early on reaching terminal_state (when >= 0). reward_noise_var,
 * when non-empty, adds zero-mean Gaussian noise of the given per-state
 * variance to each observed reward.
 */
struct OnlineConfig {
    double alpha = 0.1;
    bool alpha_decay = true;
    RegularizerSpec spec{};
    int episodes = 1;
    int steps_per_episode = 1000;
    std::uint64_t seed = 0;
    int start_state = -1;
    int terminal_state = -1;
    Eigen::VectorXd reward_noise_var;
};

/// Called after every update with the global step index and current estimates.
using ValueHook = std::function<void(long step, const Eigen::VectorXd& values)>;
using ThetaHook = std::function<void(long step, double theta)>;
/// Called after each finished episode (1-based index) with the estimates.
using EpisodeHook = std::function<void(int episode, const Eigen::VectorXd& values)>;

/**
 * Tabular TD(0): v(s) <- v(s) + alpha (r(s) + gamma v(s') - v(s)).
 * Requires spec.kind == None.
 */
ValueFunction td0(const TabularMdp& mdp, const OnlineConfig& cfg, const ValueHook& hook = {},
                  const EpisodeHook& episode_hook = {});

/**
 * Policy evaluation with exponential smoothing. Per episode p is
 * initialized to v(s0); per step
 *   v(s) <- v(s) + alpha (r(s) + gamma ((1 - beta) v(s') + beta p) - v(s))
 *   p    <- (1 - lambda) v(s) + lambda p        (with the updated v(s))
 * Requires spec.kind == ExponentialSmoothing; lambda = 0 recovers
 * previous-state regularization. beta_decay shrinks beta by
 * beta_decay per global step, floored at 0.
 */
ValueFunction algorithm1(const TabularMdp& mdp, const OnlineConfig& cfg,
                         const ValueHook& hook = {}, const EpisodeHook& episode_hook = {});

/// Linear value model v(s) = theta * s over a scalar state.
struct LinearValueModel {
    double theta = 0.0;
};

/**
 * Temporally regularized semi-gradient TD on the walk with the
 * one-parameter linear model. The bootstrap target mixes the next
 * observation's value with the previous observation's value
 * (PreviousState) or a recursively smoothed value of all earlier
 * observations (ExponentialSmoothing); only the prediction is
 * differentiated. Episodes start at a uniformly random position; the step
 * size is cfg.alpha, constant. Throws DivergenceError once |theta| > 1e6.
 */
LinearValueModel semi_gradient_td(const NoisyWalk& walk, const OnlineConfig& cfg,
                                  const ThetaHook& hook = {});

}  // namespace tempreg
