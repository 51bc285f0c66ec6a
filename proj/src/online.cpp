#include "tempreg/online.hpp"

#include <cmath>
#include <string>

#include "tempreg/errors.hpp"

namespace tempreg {

namespace {

void check_common(const TabularMdp& mdp, const OnlineConfig& cfg) {
    cfg.spec.validate();
    if (cfg.alpha < 0.0) throw std::invalid_argument("online: alpha must be nonnegative");
    if (cfg.episodes < 1) throw std::invalid_argument("online: episodes must be >= 1");
    if (cfg.steps_per_episode < 1)
        throw std::invalid_argument("online: steps_per_episode must be >= 1");
    if (cfg.start_state >= mdp.n_states())
        throw std::invalid_argument("online: start_state out of range");
    if (cfg.reward_noise_var.size() != 0 && cfg.reward_noise_var.size() != mdp.n_states())
        throw DimensionMismatchError("online: reward_noise_var size mismatch");
}

// Shared episode driver so td0 and algorithm1 consume randomness
// identically under the same seed. The update callback sees
// (s, reward, s_next, alpha) and mutates the estimates.
template <typename Update, typename EpisodeStart>
void run_tabular(const TabularMdp& mdp, const OnlineConfig& cfg, const EpisodeStart& on_episode,
                 const Update& update, const ValueHook& hook, const EpisodeHook& episode_hook,
                 Eigen::VectorXd& v) {
    RngStream root(cfg.seed);
    RngStream starts = root.split("episode-starts");
    RngStream chain = root.split("transitions");
    RngStream noise = root.split("reward-noise");

    Eigen::VectorXi visits = Eigen::VectorXi::Zero(mdp.n_states());
    const bool noisy = cfg.reward_noise_var.size() != 0;
    long step = 0;
    for (int ep = 0; ep < cfg.episodes; ++ep) {
        int s = cfg.start_state >= 0 ? cfg.start_state : starts.uniform_int(mdp.n_states());
        on_episode(s);
        for (int t = 0; t < cfg.steps_per_episode; ++t) {
            if (s == cfg.terminal_state) break;
            const int s_next = sample_transition(mdp.transition(), s, chain);
            double reward = mdp.reward()(s);
            if (noisy && cfg.reward_noise_var(s) > 0.0)
                reward += std::sqrt(cfg.reward_noise_var(s)) * noise.normal();
            const double alpha =
                cfg.alpha_decay ? cfg.alpha / (1.0 + visits(s)) : cfg.alpha;
            visits(s) += 1;
            update(s, reward, s_next, alpha, step);
            if (hook) hook(step, v);
            ++step;
            s = s_next;
        }
        if (episode_hook) episode_hook(ep + 1, v);
    }
}

}  // namespace

ValueFunction td0(const TabularMdp& mdp, const OnlineConfig& cfg, const ValueHook& hook,
                  const EpisodeHook& episode_hook) {
    check_common(mdp, cfg);
    if (cfg.spec.kind != RegularizerKind::None)
        throw std::invalid_argument("td0: spec.kind must be None");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.n_states());
    run_tabular(
        mdp, cfg, [](int) {},
        [&](int s, double reward, int s_next, double alpha, long) {
            v(s) += alpha * (reward + mdp.gamma() * v(s_next) - v(s));
        },
        hook, episode_hook, v);
    return ValueFunction(std::move(v));
}

ValueFunction algorithm1(const TabularMdp& mdp, const OnlineConfig& cfg, const ValueHook& hook,
                         const EpisodeHook& episode_hook) {
    check_common(mdp, cfg);
    if (cfg.spec.kind != RegularizerKind::ExponentialSmoothing)
        throw std::invalid_argument(
            "algorithm1: spec.kind must be ExponentialSmoothing (lambda = 0 for previous-state)");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.n_states());
    const double lambda = cfg.spec.lambda;
    double p = 0.0;
    run_tabular(
        mdp, cfg, [&](int s0) { p = v(s0); },
        [&](int s, double reward, int s_next, double alpha, long step) {
            const double beta = std::max(0.0, cfg.spec.beta - cfg.spec.beta_decay * step);
            const double target =
                reward + mdp.gamma() * ((1.0 - beta) * v(s_next) + beta * p);
            v(s) += alpha * (target - v(s));
            p = (1.0 - lambda) * v(s) + lambda * p;
        },
        hook, episode_hook, v);
    return ValueFunction(std::move(v));
}

LinearValueModel semi_gradient_td(const NoisyWalk& walk, const OnlineConfig& cfg,
                                  const ThetaHook& hook) {
    cfg.spec.validate();
    if (cfg.spec.kind == RegularizerKind::None)
        throw std::invalid_argument(
            "semi_gradient_td: spec.kind must be PreviousState or ExponentialSmoothing");
    if (cfg.alpha < 0.0) throw std::invalid_argument("semi_gradient_td: alpha must be nonnegative");
    if (cfg.episodes < 1) throw std::invalid_argument("semi_gradient_td: episodes must be >= 1");

    const bool smoothing = cfg.spec.kind == RegularizerKind::ExponentialSmoothing;
    const double lambda = smoothing ? cfg.spec.lambda : 0.0;

    RngStream root(cfg.seed);
    RngStream starts = root.split("episode-starts");
    RngStream env = root.split("walk");

    double theta = 0.0;
    long step = 0;
    for (int ep = 0; ep < cfg.episodes; ++ep) {
        NoisyWalk state = walk;
        state.position = starts.uniform01();
        double obs = walk_observation(state, env);
        double obs_prev = obs;
        double smoothed = theta * obs;  // episode-start backward value
        for (int t = 0; t < walk.episode_steps; ++t) {
            const WalkStep ws = noisy_walk_step(state, env);
            const double beta = std::max(0.0, cfg.spec.beta - cfg.spec.beta_decay * step);
            const double backward = smoothing ? smoothed : theta * obs_prev;
            const double target =
                ws.reward + walk.gamma * ((1.0 - beta) * theta * ws.observation + beta * backward);
            theta += cfg.alpha * (target - theta * obs) * obs;
            if (std::abs(theta) > 1e6)
                throw DivergenceError("theta reached " + std::to_string(theta) +
                                      "; reduce the step size");
            if (smoothing) smoothed = (1.0 - lambda) * theta * obs + lambda * smoothed;
            if (hook) hook(step, theta);
            ++step;
            obs_prev = obs;
            obs = ws.observation;
            state = ws.next;
        }
    }
    return {theta};
}

}  // namespace tempreg
