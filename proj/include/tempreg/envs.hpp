#pragma once

#include <cstdint>

#include "tempreg/mdp.hpp"
#include "tempreg/rng.hpp"

namespace tempreg {

enum class RewardMode { Uniform, None };

/**
 * Random n-state chain: each transition row is n iid Uniform(0,1) draws
 * normalized to sum 1 (all entries strictly positive, hence ergodic);
 * rewards iid Uniform(0,1) or all zero.
 */
TabularMdp random_mdp(int n, std::uint64_t seed, RewardMode reward_mode = RewardMode::Uniform,
                      double gamma = 0.9);

/**
 * Smooths the rewards of n_smooth temporally adjacent states. A trajectory
 * is sampled starting from the stationary distribution; the first n_smooth
 * distinct states visited, in visit order s_(1)..s_(N), receive the
 * sequential in-place update r(s_(k)) <- (r(s_(k)) + r(s_(k+1))) / 2 for
 * k = 1..N-1. Throws TrajectoryTooShortError if fewer than n_smooth
 * distinct states appear within 10 * n_states * n_smooth steps.
 */
TabularMdp smooth_rewards(const TabularMdp& mdp, int n_smooth, std::uint64_t seed);

struct ThreeStateParams {
    // S1 branches to S2 or S3; S2 returns to S1; S3 passes through S2. The
    // two loop lengths differ, so S1's forward bootstrap is diverse while
    // its predecessor is always S2.
    double branch_prob = 0.5;  // probability of S1 -> S2
    double reward_s1 = 1.0;
    double reward_s2 = 4.0;
    double reward_s3 = -4.0;
    double s1_noise_var = 1.0;  // sampled reward noise at S1, zero elsewhere
    double gamma = 0.9;
};

struct ThreeStateMdp {
    TabularMdp mdp;                  // deterministic mean rewards
    Eigen::VectorXd reward_noise_var;  // per-state variance of the sampled reward noise
};

/// Three-state chain whose S1 value estimate has high variance under TD.
ThreeStateMdp three_state_variance_mdp(const ThreeStateParams& params = {});

/**
 * Two 3x3 rooms side by side (18 states on a 3x6 grid), joined by a single
 * doorway between the middle-right cell of room 1 and the middle-left cell
 * of room 2. Four moves (up/down/left/right) under the uniform random
 * policy; moves into walls keep the state; the door crossing succeeds with
 * probability 0.5, otherwise the agent stays. Reward 1 everywhere except
 * the absorbing terminal (bottom-right, reward 0); gamma = 0.9; episodes
 * start at the top-left.
 */
struct RoomWorld {
    TabularMdp mdp;
    int start_state;
    int terminal_state;
    int rows;
    int cols;
    double door_success = 0.5;
};

RoomWorld room_world();

/**
 * Reversal chain of the room's experience stream. The absorbing terminal
 * has a degenerate stationary distribution, so the reversal is computed on
 * the restart chain (terminal -> start with probability 1) and the terminal
 * row is then put back to absorbing, keeping the episodic boundary
 * condition v(terminal) = 0 in every regularized operator built from it.
 */
StochasticMatrix room_reversal(const RoomWorld& room);

/**
 * One-dimensional random walk on [0, 1]. Moves are zero-mean Gaussian with
 * variance step_var and the position is clipped to the interval; the
 * observation is the new position plus iid zero-mean Gaussian noise of
 * variance obs_var (never fed back into the dynamics); the reward is the
 * new true position.
 */
struct NoisyWalk {
    double position = 0.5;
    double step_var = 0.05;
    double obs_var = 0.0;
    double gamma = 0.95;
    int episode_steps = 1000;
};

struct WalkStep {
    NoisyWalk next;
    double observation;  // next position + sensor noise
    double reward;       // next true position
};

WalkStep noisy_walk_step(const NoisyWalk& walk, RngStream& rng);

/// Observation of the walk's current position (used at episode starts).
double walk_observation(const NoisyWalk& walk, RngStream& rng);

}  // namespace tempreg
