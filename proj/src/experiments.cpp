#include "tempreg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tempreg/online.hpp"
#include "tempreg/parallel.hpp"

namespace tempreg {

namespace {

std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index = 0) {
    return detail::mix64(detail::mix64(root ^ detail::hash_label(label)) ^ detail::mix64(index));
}

std::vector<ExperimentRecord> concat(std::vector<std::vector<ExperimentRecord>> buckets) {
    std::vector<ExperimentRecord> out;
    std::size_t total = 0;
    for (const auto& b : buckets) total += b.size();
    out.reserve(total);
    for (auto& b : buckets)
        for (auto& r : b) out.push_back(std::move(r));
    return out;
}

bool near(std::optional<double> a, double b) { return a && std::abs(*a - b) < 1e-12; }

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

std::vector<ExperimentRecord> run_mixing(const SweepPlan& plan) {
    std::vector<std::vector<ExperimentRecord>> buckets(plan.mixing_seeds);
    // mean curves accumulated per (beta, iteration) after the parallel part
    parallel_for_index(plan.mixing_seeds, plan.threads, [&](int k) {
        const TabularMdp mdp = random_mdp(plan.mixing_states,
                                          derive_seed(plan.root_seed, "mixing", k),
                                          RewardMode::None);
        const StationaryDistribution mu = stationary_distribution(mdp.transition());
        const StochasticMatrix p_rev = reversal(mdp.transition(), mu);
        auto& rows = buckets[k];
        for (double beta : plan.betas) {
            const StochasticMatrix m = mix(mdp.transition(), p_rev, beta);
            const MixingCurve curve = mixing_error_curves(m, mu, plan.mixing_iters);
            for (int i = 0; i < plan.mixing_iters; ++i) {
                rows.push_back({"mixing", k, i + 1, "dist_to_Pinf", curve.max_abs[i], beta,
                                std::nullopt, std::nullopt, std::nullopt, ""});
                rows.push_back({"mixing", k, i + 1, "dist_to_Pinf_fro", curve.frobenius[i], beta,
                                std::nullopt, std::nullopt, std::nullopt, ""});
            }
        }
    });
    std::vector<ExperimentRecord> out = concat(std::move(buckets));

    for (double beta : plan.betas) {
        for (int i = 1; i <= plan.mixing_iters; ++i) {
            double sum = 0.0, sum_fro = 0.0;
            for (const auto& r : out) {
                if (r.seed < 0 || r.step != i || !near(r.beta, beta)) continue;
                if (r.metric == "dist_to_Pinf") sum += r.value;
                if (r.metric == "dist_to_Pinf_fro") sum_fro += r.value;
            }
            out.push_back({"mixing", -1, i, "dist_to_Pinf_mean", sum / plan.mixing_seeds, beta,
                           std::nullopt, std::nullopt, std::nullopt, ""});
            out.push_back({"mixing", -1, i, "dist_to_Pinf_fro_mean", sum_fro / plan.mixing_seeds,
                           beta, std::nullopt, std::nullopt, std::nullopt, ""});
        }
    }
    return out;
}

std::vector<ExperimentRecord> run_bias(const SweepPlan& plan) {
    std::vector<std::vector<ExperimentRecord>> buckets(plan.bias_seeds);
    parallel_for_index(plan.bias_seeds, plan.threads, [&](int k) {
        const TabularMdp base = random_mdp(plan.bias_states, derive_seed(plan.root_seed, "bias", k),
                                           RewardMode::Uniform, plan.bias_gamma);
        const StationaryDistribution mu = stationary_distribution(base.transition());
        const StochasticMatrix p_rev = reversal(base.transition(), mu);
        // one smoothing trajectory per seed: larger N extends the same visit order
        const std::uint64_t smooth_seed = derive_seed(plan.root_seed, "bias-smooth", k);
        auto& rows = buckets[k];
        for (int n_smooth : plan.smooth_counts) {
            const TabularMdp smoothed = smooth_rewards(base, n_smooth, smooth_seed);
            const ValueFunction v = solve_exact(smoothed);
            for (double beta : plan.betas) {
                const ValueFunction vb = regularized_solve(
                    smoothed, p_rev, RegularizerSpec::previous_state(beta));
                const double bias = (v.values - vb.values).cwiseAbs().mean();
                rows.push_back({"bias", k, 0, "mean_abs_bias", bias, beta, std::nullopt,
                                std::nullopt, n_smooth, ""});
            }
        }
    });
    std::vector<ExperimentRecord> out = concat(std::move(buckets));

    for (int n_smooth : plan.smooth_counts) {
        for (double beta : plan.betas) {
            double sum = 0.0;
            for (const auto& r : out)
                if (r.seed >= 0 && near(r.beta, beta) && r.n_smooth == n_smooth) sum += r.value;
            out.push_back({"bias", -1, 0, "mean_abs_bias_mean", sum / plan.bias_seeds, beta,
                           std::nullopt, std::nullopt, n_smooth, ""});
        }
    }
    return out;
}

std::vector<ExperimentRecord> run_variance(const SweepPlan& plan) {
    const ThreeStateMdp env = three_state_variance_mdp();
    const double v_star_s1 = solve_exact(env.mdp).values(0);
    const int snaps = plan.variance_steps / plan.variance_snapshot_every;

    struct MethodDef {
        const char* name;
        double beta;
    };
    const MethodDef methods[] = {{"none", 0.0}, {"previous-state", plan.variance_beta}};

    // estimates[method][run][snap]
    std::vector<std::vector<std::vector<double>>> estimates(
        2, std::vector<std::vector<double>>(plan.variance_runs, std::vector<double>(snaps)));

    parallel_for_index(plan.variance_runs, plan.threads, [&](int run) {
        for (int mi = 0; mi < 2; ++mi) {
            OnlineConfig cfg;
            cfg.alpha = plan.variance_alpha;
            cfg.alpha_decay = false;
            cfg.episodes = 1;
            cfg.steps_per_episode = plan.variance_steps;
            cfg.seed = derive_seed(plan.root_seed, "variance", run);
            cfg.start_state = 0;
            cfg.reward_noise_var = env.reward_noise_var;
            auto snapshot = [&](long step, const Eigen::VectorXd& v) {
                if ((step + 1) % plan.variance_snapshot_every == 0)
                    estimates[mi][run][(step + 1) / plan.variance_snapshot_every - 1] = v(0);
            };
            if (mi == 0) {
                cfg.spec = RegularizerSpec::none();
                td0(env.mdp, cfg, snapshot);
            } else {
                cfg.spec = RegularizerSpec::exponential_smoothing(methods[mi].beta, 0.0);
                algorithm1(env.mdp, cfg, snapshot);
            }
        }
    });

    std::vector<ExperimentRecord> out;
    out.push_back({"variance", -1, 0, "v_star_S1", v_star_s1, std::nullopt, std::nullopt,
                   std::nullopt, std::nullopt, ""});
    for (int mi = 0; mi < 2; ++mi) {
        for (int run = 0; run < plan.variance_runs; ++run)
            for (int sn = 0; sn < snaps; ++sn)
                out.push_back({"variance", run, (sn + 1LL) * plan.variance_snapshot_every,
                               "estimate_S1", estimates[mi][run][sn], methods[mi].beta, 0.0,
                               std::nullopt, std::nullopt, methods[mi].name});
        for (int sn = 0; sn < snaps; ++sn) {
            std::vector<double> col(plan.variance_runs);
            for (int run = 0; run < plan.variance_runs; ++run) col[run] = estimates[mi][run][sn];
            std::vector<double> abs_err(col);
            for (double& x : abs_err) x = std::abs(x - v_star_s1);
            const long long step = (sn + 1LL) * plan.variance_snapshot_every;
            out.push_back({"variance", -1, step, "abs_err_S1", mean_of(abs_err), methods[mi].beta,
                           0.0, std::nullopt, std::nullopt, methods[mi].name});
            out.push_back({"variance", -1, step, "var_S1", sample_variance(col), methods[mi].beta,
                           0.0, std::nullopt, std::nullopt, methods[mi].name});
        }
    }
    return out;
}

std::vector<ExperimentRecord> run_room(const SweepPlan& plan) {
    const RoomWorld room = room_world();
    const StochasticMatrix p_rev = room_reversal(room);

    struct MethodDef {
        const char* name;
        double beta;
        double lambda;
        Eigen::VectorXd reference;
    };
    std::vector<MethodDef> methods;
    methods.push_back({"none", 0.0, 0.0, solve_exact(room.mdp).values});
    methods.push_back(
        {"previous-state", plan.room_beta, 0.0,
         regularized_solve(room.mdp, p_rev, RegularizerSpec::previous_state(plan.room_beta))
             .values});
    methods.push_back({"exp-smoothing", plan.room_beta, plan.room_lambda,
                       regularized_solve(room.mdp, p_rev,
                                         RegularizerSpec::exponential_smoothing(
                                             plan.room_beta, plan.room_lambda))
                           .values});

    const int n_methods = static_cast<int>(methods.size());
    const int n = room.mdp.n_states();
    std::vector<std::vector<ExperimentRecord>> buckets(plan.room_seeds);
    parallel_for_index(plan.room_seeds, plan.threads, [&](int k) {
        auto& rows = buckets[k];
        for (int mi = 0; mi < n_methods; ++mi) {
            const MethodDef& def = methods[mi];
            OnlineConfig cfg;
            cfg.alpha = plan.room_alpha;
            cfg.alpha_decay = false;
            cfg.episodes = plan.room_episodes;
            cfg.steps_per_episode = plan.room_episode_cap;
            cfg.seed = derive_seed(plan.root_seed, "room", k);
            cfg.start_state = room.start_state;
            cfg.terminal_state = room.terminal_state;
            auto per_episode = [&](int episode, const Eigen::VectorXd& v) {
                const Eigen::VectorXd err = (v - def.reference).cwiseAbs();
                rows.push_back({"room", k, episode, "mean_abs_err", err.mean(), def.beta,
                                def.lambda, std::nullopt, std::nullopt, def.name});
                if (episode % plan.room_heatmap_every == 0) {
                    for (int s = 0; s < n; ++s) {
                        char name[24];
                        std::snprintf(name, sizeof(name), "abs_err_s%02d", s);
                        rows.push_back({"room", k, episode, name, err(s), def.beta, def.lambda,
                                        std::nullopt, std::nullopt, def.name});
                    }
                }
            };
            if (mi == 0) {
                cfg.spec = RegularizerSpec::none();
                td0(room.mdp, cfg, {}, per_episode);
            } else {
                cfg.spec = RegularizerSpec::exponential_smoothing(def.beta, def.lambda);
                algorithm1(room.mdp, cfg, {}, per_episode);
            }
        }
    });
    std::vector<ExperimentRecord> out = concat(std::move(buckets));

    for (const auto& def : methods) {
        for (int e = 1; e <= plan.room_episodes; ++e) {
            double sum = 0.0;
            for (const auto& r : out)
                if (r.seed >= 0 && r.step == e && r.metric == "mean_abs_err" &&
                    r.method == def.name)
                    sum += r.value;
            out.push_back({"room", -1, e, "mean_abs_err_mean", sum / plan.room_seeds, def.beta,
                           def.lambda, std::nullopt, std::nullopt, def.name});
        }
    }
    return out;
}

double walk_return_oracle(const NoisyWalk& walk, double start, int rollouts, int horizon,
                          std::uint64_t seed) {
    RngStream rng(seed);
    double total = 0.0;
    for (int r = 0; r < rollouts; ++r) {
        NoisyWalk state = walk;
        state.position = start;
        double g = 0.0, d = 1.0;
        for (int t = 0; t < horizon; ++t) {
            const WalkStep ws = noisy_walk_step(state, rng);
            g += d * ws.reward;
            d *= walk.gamma;
            state = ws.next;
        }
        total += g;
    }
    return total / rollouts;
}

double walk_theta_star_oracle(const NoisyWalk& walk, int positions, int rollouts, int horizon,
                              std::uint64_t seed) {
    RngStream rng(seed);
    // positions drawn along the walk itself (burn-in, then spaced samples)
    NoisyWalk sampler = walk;
    sampler.position = 0.5;
    for (int t = 0; t < 5000; ++t) sampler = noisy_walk_step(sampler, rng).next;
    double sxx = 0.0, sxg = 0.0;
    for (int i = 0; i < positions; ++i) {
        for (int t = 0; t < 50; ++t) sampler = noisy_walk_step(sampler, rng).next;
        const double x0 = sampler.position;
        for (int r = 0; r < rollouts; ++r) {
            NoisyWalk state = walk;
            state.position = x0;
            double g = 0.0, d = 1.0;
            for (int t = 0; t < horizon; ++t) {
                const WalkStep ws = noisy_walk_step(state, rng);
                g += d * ws.reward;
                d *= walk.gamma;
                state = ws.next;
            }
            sxx += x0 * x0;
            sxg += x0 * g;
        }
    }
    if (sxx <= 0.0) throw std::runtime_error("walk oracle: degenerate position sample");
    return sxg / sxx;
}

std::vector<ExperimentRecord> run_noisy_walk(const SweepPlan& plan) {
    NoisyWalk base;
    base.step_var = plan.walk_step_var;
    base.episode_steps = plan.walk_steps;
    const double theta_star =
        walk_theta_star_oracle(base, plan.walk_oracle_positions, plan.walk_oracle_rollouts,
                               plan.walk_oracle_horizon, derive_seed(plan.root_seed, "walk-oracle"));

    struct MethodDef {
        const char* name;
        double beta;
    };
    const MethodDef methods[] = {{"none", 0.0}, {"previous-state", plan.walk_beta}};
    const int n_sigmas = static_cast<int>(plan.sigma2s.size());
    const int n_lambdas = static_cast<int>(plan.lambdas.size());

    // theta_sigma[sigma][method][rep], theta_lambda[lambda][rep]
    std::vector<std::vector<std::vector<double>>> theta_sigma(
        n_sigmas, std::vector<std::vector<double>>(2, std::vector<double>(plan.walk_reps)));
    std::vector<std::vector<double>> theta_lambda(n_lambdas,
                                                  std::vector<double>(plan.walk_reps));

    parallel_for_index(plan.walk_reps, plan.threads, [&](int rep) {
        for (int si = 0; si < n_sigmas; ++si) {
            NoisyWalk walk = base;
            walk.obs_var = plan.sigma2s[si];
            for (int mi = 0; mi < 2; ++mi) {
                OnlineConfig cfg;
                cfg.alpha = plan.walk_alpha;
                cfg.alpha_decay = false;
                cfg.episodes = plan.walk_episodes_per_rep;
                cfg.spec = RegularizerSpec::previous_state(methods[mi].beta);
                cfg.seed = derive_seed(plan.root_seed, "walk-sigma",
                                       static_cast<std::uint64_t>(si) * 1000003ULL + rep);
                theta_sigma[si][mi][rep] = semi_gradient_td(walk, cfg).theta;
            }
        }
        NoisyWalk walk = base;
        walk.obs_var = plan.walk_lambda_sigma2;
        for (int li = 0; li < n_lambdas; ++li) {
            OnlineConfig cfg;
            cfg.alpha = plan.walk_alpha;
            cfg.alpha_decay = false;
            cfg.episodes = plan.walk_episodes_per_rep;
            cfg.spec = RegularizerSpec::exponential_smoothing(plan.walk_beta, plan.lambdas[li]);
            cfg.seed = derive_seed(plan.root_seed, "walk-lambda", rep);
            theta_lambda[li][rep] = semi_gradient_td(walk, cfg).theta;
        }
    });

    std::vector<ExperimentRecord> out;
    out.push_back({"noisy_walk_sigma", -1, 0, "theta_star", theta_star, std::nullopt, std::nullopt,
                   std::nullopt, std::nullopt, ""});
    for (int si = 0; si < n_sigmas; ++si) {
        for (int mi = 0; mi < 2; ++mi) {
            for (int rep = 0; rep < plan.walk_reps; ++rep)
                out.push_back({"noisy_walk_sigma", rep, 0, "theta_hat", theta_sigma[si][mi][rep],
                               methods[mi].beta, 0.0, plan.sigma2s[si], std::nullopt,
                               methods[mi].name});
            std::vector<double> err(plan.walk_reps);
            for (int rep = 0; rep < plan.walk_reps; ++rep)
                err[rep] = std::abs(theta_sigma[si][mi][rep] - theta_star);
            out.push_back({"noisy_walk_sigma", -1, 0, "abs_theta_err", mean_of(err),
                           methods[mi].beta, 0.0, plan.sigma2s[si], std::nullopt,
                           methods[mi].name});
        }
    }
    out.push_back({"noisy_walk_lambda", -1, 0, "theta_star", theta_star, std::nullopt,
                   std::nullopt, std::nullopt, std::nullopt, ""});
    for (int li = 0; li < n_lambdas; ++li) {
        for (int rep = 0; rep < plan.walk_reps; ++rep)
            out.push_back({"noisy_walk_lambda", rep, 0, "theta_hat", theta_lambda[li][rep],
                           plan.walk_beta, plan.lambdas[li], plan.walk_lambda_sigma2, std::nullopt,
                           "exp-smoothing"});
        std::vector<double> err(plan.walk_reps);
        for (int rep = 0; rep < plan.walk_reps; ++rep)
            err[rep] = std::abs(theta_lambda[li][rep] - theta_star);
        out.push_back({"noisy_walk_lambda", -1, 0, "abs_theta_err", mean_of(err), plan.walk_beta,
                       plan.lambdas[li], plan.walk_lambda_sigma2, std::nullopt, "exp-smoothing"});
    }
    return out;
}

namespace {

double find_agg(const std::vector<ExperimentRecord>& recs, const std::string& experiment,
                const std::string& metric, long long step,
                std::optional<double> beta = std::nullopt,
                std::optional<double> lambda = std::nullopt, const std::string& method = "") {
    for (const auto& r : recs) {
        if (r.seed != -1 || r.experiment != experiment || r.metric != metric || r.step != step)
            continue;
        if (beta && !near(r.beta, *beta)) continue;
        if (lambda && !near(r.lambda, *lambda)) continue;
        if (!method.empty() && r.method != method) continue;
        return r.value;
    }
    throw std::runtime_error("aggregate record not found: " + experiment + "/" + metric);
}

}  // namespace

TrendResult check_mixing_u_shape(const SweepPlan& plan, const std::vector<ExperimentRecord>& recs) {
    TrendResult res;
    res.name = "mixing_u_shape";
    const long long iter = 5;
    const double beta0 = find_agg(recs, "mixing", "dist_to_Pinf_mean", iter, 0.0);
    double best = std::numeric_limits<double>::infinity();
    double best_beta = 0.0;
    for (double beta : plan.betas) {
        if (beta <= 0.0 || beta >= 1.0) continue;
        const double v = find_agg(recs, "mixing", "dist_to_Pinf_mean", iter, beta);
        if (v < best) {
            best = v;
            best_beta = beta;
        }
    }
    res.pass = best < beta0;
    res.stats = {{"iteration", static_cast<double>(iter)},
                 {"beta0_err", beta0},
                 {"interior_min_err", best},
                 {"argmin_beta", best_beta}};
    res.note = "seed-averaged distance of the mixed chain's 5th power to the limit";
    return res;
}

TrendResult check_bias_slope(const SweepPlan& plan, const std::vector<ExperimentRecord>& recs) {
    TrendResult res;
    res.name = "bias_slope_negative";
    const double beta = 0.5;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int n = static_cast<int>(plan.smooth_counts.size());
    for (int n_smooth : plan.smooth_counts) {
        double y = 0.0;
        for (const auto& r : recs)
            if (r.seed == -1 && r.metric == "mean_abs_bias_mean" && near(r.beta, beta) &&
                r.n_smooth == n_smooth)
                y = r.value;
        const double x = n_smooth;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    res.pass = slope < 0.0;
    res.stats = {{"beta", beta}, {"slope", slope}};
    res.note = "OLS slope of seed-averaged mean_abs_bias on the smoothing count N";
    return res;
}

TrendResult check_variance_reduction(const SweepPlan& plan,
                                     const std::vector<ExperimentRecord>& recs) {
    TrendResult res;
    res.name = "variance_reduction";
    const long long quartile_start = 3LL * plan.variance_steps / 4;
    double sum_none = 0.0, sum_reg = 0.0;
    int count = 0;
    for (const auto& r : recs) {
        if (r.seed != -1 || r.metric != "var_S1" || r.step <= quartile_start) continue;
        if (r.method == "none") {
            sum_none += r.value;
            ++count;
        } else if (r.method == "previous-state") {
            sum_reg += r.value;
        }
    }
    if (count == 0) throw std::runtime_error("variance records missing");
    res.pass = sum_reg < sum_none;
    res.stats = {{"beta", plan.variance_beta},
                 {"final_quartile_var_none", sum_none / count},
                 {"final_quartile_var_beta", sum_reg / count}};
    res.note = "100-run ensemble variance of the S1 estimate, final quartile of training";
    return res;
}

TrendResult check_room_ordering(const SweepPlan& plan, const std::vector<ExperimentRecord>& recs) {
    TrendResult res;
    res.name = "room_ordering";
    const long long budget = plan.room_budget_episodes;
    const double none = find_agg(recs, "room", "mean_abs_err_mean", budget, std::nullopt,
                                 std::nullopt, "none");
    const double prev = find_agg(recs, "room", "mean_abs_err_mean", budget, std::nullopt,
                                 std::nullopt, "previous-state");
    const double exps = find_agg(recs, "room", "mean_abs_err_mean", budget, std::nullopt,
                                 std::nullopt, "exp-smoothing");
    res.pass = exps < prev && prev < none;
    res.stats = {{"budget_episodes", static_cast<double>(budget)},
                 {"err_none", none},
                 {"err_previous_state", prev},
                 {"err_exp_smoothing", exps}};
    res.note = "mean error to each method's own fixed point after the trajectory budget";
    return res;
}

TrendResult check_walk_robustness(const SweepPlan& plan,
                                  const std::vector<ExperimentRecord>& recs) {
    TrendResult res;
    res.name = "walk_robustness";
    const double sigma_max = *std::max_element(plan.sigma2s.begin(), plan.sigma2s.end());
    double err_none = 0.0, err_reg = 0.0;
    for (const auto& r : recs) {
        if (r.seed != -1 || r.experiment != "noisy_walk_sigma" || r.metric != "abs_theta_err")
            continue;
        if (!near(r.sigma2, sigma_max)) continue;
        if (r.method == "none") err_none = r.value;
        if (r.method == "previous-state") err_reg = r.value;
    }
    res.pass = err_reg < err_none;
    res.stats = {{"sigma2", sigma_max},
                 {"abs_theta_err_none", err_none},
                 {"abs_theta_err_beta", err_reg}};
    res.note = "mean |theta_hat - theta*| at the largest sensor-noise variance in the grid";
    return res;
}

TrendResult check_walk_lambda_interior(const SweepPlan& plan,
                                       const std::vector<ExperimentRecord>& recs) {
    TrendResult res;
    res.name = "walk_lambda_interior";
    std::vector<double> errs;
    for (double lambda : plan.lambdas)
        errs.push_back(find_agg(recs, "noisy_walk_lambda", "abs_theta_err", 0, std::nullopt,
                                lambda, "exp-smoothing"));
    const auto it = std::min_element(errs.begin(), errs.end());
    const int argmin = static_cast<int>(it - errs.begin());
    res.pass = argmin != 0 && argmin != static_cast<int>(errs.size()) - 1;
    res.stats = {{"sigma2", plan.walk_lambda_sigma2},
                 {"argmin_lambda", plan.lambdas[argmin]},
                 {"min_err", *it},
                 {"err_lambda_first", errs.front()},
                 {"err_lambda_last", errs.back()}};
    res.note = "minimum of the lambda error curve should fall strictly inside the grid";
    return res;
}

}  // namespace tempreg
