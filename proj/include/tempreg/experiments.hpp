#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tempreg/envs.hpp"
#include "tempreg/records.hpp"

namespace tempreg {

/**
 * Grids, ensemble sizes, and horizons for the experiment sweeps. Every run
 * derives its randomness from root_seed, so a plan re-run reproduces its
 * outputs byte for byte.
 */
struct SweepPlan {
    std::uint64_t root_seed = 9;

    std::vector<double> betas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> lambdas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> sigma2s{0.0, 0.01, 0.04, 0.09, 0.16, 0.25};
    std::vector<int> smooth_counts{0, 2, 4, 6, 8, 10};

    // mixing: random 10-state chains, distance of powers to the limit
    int mixing_states = 10;
    int mixing_seeds = 30;
    int mixing_iters = 20;

    // bias: reward smoothing vs exact fixed-point gap
    int bias_states = 10;
    int bias_seeds = 30;
    double bias_gamma = 0.9;

    // variance: three-state chain, 100-run ensembles
    int variance_runs = 100;
    int variance_steps = 4000;
    int variance_snapshot_every = 10;
    double variance_alpha = 0.1;
    double variance_beta = 0.5;

    // room: learning-speed comparison of the three regularizers
    int room_seeds = 20;
    int room_episodes = 100;
    int room_episode_cap = 2000;
    int room_heatmap_every = 10;
    int room_budget_episodes = 20;
    double room_alpha = 0.3;
    double room_beta = 0.5;
    double room_lambda = 0.5;

    // noisy walk: sensor-noise robustness and the lambda sweep
    int walk_reps = 1000;
    int walk_episodes_per_rep = 2;
    int walk_steps = 1000;
    double walk_alpha = 0.5;
    double walk_beta = 0.5;
    double walk_step_var = 0.05;
    double walk_lambda_sigma2 = 0.09;
    int walk_oracle_positions = 400;
    int walk_oracle_rollouts = 30;
    int walk_oracle_horizon = 400;

    int threads = 0;  // 0 = hardware concurrency
};

std::vector<ExperimentRecord> run_mixing(const SweepPlan& plan);
std::vector<ExperimentRecord> run_bias(const SweepPlan& plan);
std::vector<ExperimentRecord> run_variance(const SweepPlan& plan);
std::vector<ExperimentRecord> run_room(const SweepPlan& plan);
/// Produces both the sigma sweep ("noisy_walk_sigma") and the lambda sweep
/// ("noisy_walk_lambda") record sets.
std::vector<ExperimentRecord> run_noisy_walk(const SweepPlan& plan);

/**
 * Monte Carlo oracle for the walk's best linear parameter: discounted
 * returns are rolled out from positions sampled along the walk itself and
 * theta is fit by least squares through the origin. Independent of the TD
 * learner; the interior closed form 1/(1 - gamma) validates it.
 */
double walk_theta_star_oracle(const NoisyWalk& walk, int positions, int rollouts, int horizon,
                              std::uint64_t seed);

/// Mean discounted MC return from a fixed start position (oracle validation).
double walk_return_oracle(const NoisyWalk& walk, double start, int rollouts, int horizon,
                          std::uint64_t seed);

struct TrendResult {
    std::string name;
    bool pass = false;
    std::map<std::string, double> stats;
    std::string note;
};

TrendResult check_mixing_u_shape(const SweepPlan& plan, const std::vector<ExperimentRecord>& recs);
TrendResult check_bias_slope(const SweepPlan& plan, const std::vector<ExperimentRecord>& recs);
TrendResult check_variance_reduction(const SweepPlan& plan,
                                     const std::vector<ExperimentRecord>& recs);
TrendResult check_room_ordering(const SweepPlan& plan, const std::vector<ExperimentRecord>& recs);
TrendResult check_walk_robustness(const SweepPlan& plan, const std::vector<ExperimentRecord>& recs);
TrendResult check_walk_lambda_interior(const SweepPlan& plan,
                                       const std::vector<ExperimentRecord>& recs);

}  // namespace tempreg
