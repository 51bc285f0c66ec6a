#include "tempreg/envs.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "tempreg/errors.hpp"

namespace tempreg {

TabularMdp random_mdp(int n, std::uint64_t seed, RewardMode reward_mode, double gamma) {
    if (n < 2) throw std::invalid_argument("random_mdp: need at least 2 states");
    RngStream rng(seed);
    RngStream transitions = rng.split("transitions");
    RngStream rewards = rng.split("rewards");
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            p(i, j) = transitions.uniform01();
            row_sum += p(i, j);
        }
        p.row(i) /= row_sum;
    }
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    if (reward_mode == RewardMode::Uniform)
        for (int i = 0; i < n; ++i) r(i) = rewards.uniform01();
    return TabularMdp(StochasticMatrix(std::move(p)), std::move(r), gamma);
}

TabularMdp smooth_rewards(const TabularMdp& mdp, int n_smooth, std::uint64_t seed) {
    const int n = mdp.n_states();
    if (n_smooth < 0 || n_smooth > n)
        throw std::invalid_argument("smooth_rewards: n_smooth outside [0, n_states]");
    if (n_smooth <= 1) return mdp;

    RngStream rng(seed);
    const StationaryDistribution mu = stationary_distribution(mdp.transition());

    // start state drawn from mu
    int s = n - 1;
    {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += mu[i];
            if (u < acc) {
                s = i;
                break;
            }
        }
    }

    std::vector<int> order{s};
    std::unordered_set<int> seen{s};
    const long budget = 10L * n * n_smooth;
    for (long t = 0; t < budget && static_cast<int>(order.size()) < n_smooth; ++t) {
        s = sample_transition(mdp.transition(), s, rng);
        if (seen.insert(s).second) order.push_back(s);
    }
    if (static_cast<int>(order.size()) < n_smooth)
        throw TrajectoryTooShortError("visited only " + std::to_string(order.size()) +
                                      " distinct states of the requested " +
                                      std::to_string(n_smooth));

    Eigen::VectorXd r = mdp.reward();
    for (int k = 0; k + 1 < n_smooth; ++k)
        r(order[k]) = 0.5 * (r(order[k]) + r(order[k + 1]));
    return TabularMdp(mdp.transition(), std::move(r), mdp.gamma());
}

ThreeStateMdp three_state_variance_mdp(const ThreeStateParams& params) {
    if (!(params.branch_prob > 0.0 && params.branch_prob < 1.0))
        throw std::invalid_argument("three_state_variance_mdp: branch_prob must be in (0, 1)");
    Eigen::MatrixXd p(3, 3);
    p << 0.0, params.branch_prob, 1.0 - params.branch_prob,
         1.0, 0.0, 0.0,
         0.0, 1.0, 0.0;
    Eigen::VectorXd r(3);
    r << params.reward_s1, params.reward_s2, params.reward_s3;
    Eigen::VectorXd noise(3);
    noise << params.s1_noise_var, 0.0, 0.0;
    return {TabularMdp(StochasticMatrix(std::move(p)), std::move(r), params.gamma),
            std::move(noise)};
}

RoomWorld room_world() {
    constexpr int kRows = 3, kCols = 6;
    constexpr int n = kRows * kCols;
    constexpr double kDoorSuccess = 0.5;
    const auto id = [](int r, int c) { return r * kCols + c; };
    const int terminal = id(kRows - 1, kCols - 1);

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    constexpr int dr[4] = {-1, 1, 0, 0};
    constexpr int dc[4] = {0, 0, -1, 1};
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            const int s = id(r, c);
            if (s == terminal) {
                p(s, s) = 1.0;
                continue;
            }
            for (int a = 0; a < 4; ++a) {
                const int r2 = r + dr[a];
                const int c2 = c + dc[a];
                bool blocked = r2 < 0 || r2 >= kRows || c2 < 0 || c2 >= kCols;
                const bool crossing = !blocked && ((c == 2 && c2 == 3) || (c == 3 && c2 == 2));
                const bool door = crossing && r == 1;  // the sole opening in the shared wall
                if (crossing && !door) blocked = true;
                if (blocked) {
                    p(s, s) += 0.25;
                } else if (door) {
                    p(s, id(r2, c2)) += 0.25 * kDoorSuccess;
                    p(s, s) += 0.25 * (1.0 - kDoorSuccess);
                } else {
                    p(s, id(r2, c2)) += 0.25;
                }
            }
        }
    }
    Eigen::VectorXd r = Eigen::VectorXd::Ones(n);
    r(terminal) = 0.0;
    return {TabularMdp(StochasticMatrix(std::move(p)), std::move(r), 0.9),
            id(0, 0), terminal, kRows, kCols, kDoorSuccess};
}

StochasticMatrix room_reversal(const RoomWorld& room) {
    const int n = room.mdp.n_states();
    Eigen::MatrixXd restart = room.mdp.transition().matrix();
    restart.row(room.terminal_state).setZero();
    restart(room.terminal_state, room.start_state) = 1.0;
    const StochasticMatrix restart_chain(std::move(restart));
    const StationaryDistribution mu = stationary_distribution(restart_chain);
    Eigen::MatrixXd rev = reversal(restart_chain, mu).matrix();
    rev.row(room.terminal_state).setZero();
    rev(room.terminal_state, room.terminal_state) = 1.0;
    return StochasticMatrix(std::move(rev));
}

WalkStep noisy_walk_step(const NoisyWalk& walk, RngStream& rng) {
    const double action = std::sqrt(walk.step_var) * rng.normal();
    const double next_pos = std::clamp(walk.position + action, 0.0, 1.0);
    NoisyWalk next = walk;
    next.position = next_pos;
    const double noise = walk.obs_var > 0.0 ? std::sqrt(walk.obs_var) * rng.normal() : 0.0;
    return {next, next_pos + noise, next_pos};
}

double walk_observation(const NoisyWalk& walk, RngStream& rng) {
    const double noise = walk.obs_var > 0.0 ? std::sqrt(walk.obs_var) * rng.normal() : 0.0;
    return walk.position + noise;
}

}  // namespace tempreg
