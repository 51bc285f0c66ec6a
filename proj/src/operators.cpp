#include "tempreg/operators.hpp"

#include <cmath>
#include <string>

#include "tempreg/errors.hpp"

namespace tempreg {

void RegularizerSpec::validate() const {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("regularizer beta outside [0, 1]: " + std::to_string(beta));
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::invalid_argument("regularizer lambda outside [0, 1): " + std::to_string(lambda));
    if (beta_decay < 0.0)
        throw std::invalid_argument("regularizer beta_decay must be nonnegative");
}

namespace {

// (I - lambda P~)^-1 applied to the columns of rhs.
Eigen::MatrixXd resolvent_solve(const StochasticMatrix& p_rev, double lambda,
                                const Eigen::MatrixXd& rhs) {
    const int n = p_rev.size();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - lambda * p_rev.matrix();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd x = lu.solve(rhs);
    if (!x.allFinite())
        throw SingularSystemError("(I - lambda P~) is numerically singular at lambda " +
                                  std::to_string(lambda));
    return x;
}

}  // namespace

StochasticMatrix effective_matrix(const StochasticMatrix& p, const StochasticMatrix& p_rev,
                                  const RegularizerSpec& spec) {
    spec.validate();
    if (p.size() != p_rev.size()) throw DimensionMismatchError("effective_matrix: size mismatch");
    switch (spec.kind) {
        case RegularizerKind::None:
            return p;
        case RegularizerKind::PreviousState:
            return mix(p, p_rev, spec.beta);
        case RegularizerKind::ExponentialSmoothing: {
            // beta (1 - lambda) sum_{i>=1} lambda^{i-1} P~^i
            //   = beta (1 - lambda) P~ (I - lambda P~)^-1
            const int n = p.size();
            const Eigen::MatrixXd series =
                p_rev.matrix() * resolvent_solve(p_rev, spec.lambda,
                                                 Eigen::MatrixXd::Identity(n, n));
            Eigen::MatrixXd m = (1.0 - spec.beta) * p.matrix() +
                                spec.beta * (1.0 - spec.lambda) * series;
            // absorb the solver's last-ulp drift so the result validates at 1e-12
            for (int i = 0; i < n; ++i) m.row(i) /= m.row(i).sum();
            return StochasticMatrix(std::move(m));
        }
    }
    throw std::logic_error("unreachable regularizer kind");
}

ValueFunction regularized_apply(const TabularMdp& mdp, const StochasticMatrix& p_rev,
                                const RegularizerSpec& spec, const ValueFunction& v) {
    spec.validate();
    if (v.size() != mdp.n_states() || p_rev.size() != mdp.n_states())
        throw DimensionMismatchError("regularized_apply: size mismatch");
    const StochasticMatrix& p = mdp.transition();
    switch (spec.kind) {
        case RegularizerKind::None:
            return bellman_apply(mdp, v);
        case RegularizerKind::PreviousState: {
            const Eigen::VectorXd forward = p.matrix() * v.values;
            const Eigen::VectorXd backward = p_rev.matrix() * v.values;
            return ValueFunction(mdp.reward() +
                                 mdp.gamma() * ((1.0 - spec.beta) * forward + spec.beta * backward));
        }
        case RegularizerKind::ExponentialSmoothing: {
            const Eigen::VectorXd forward = p.matrix() * v.values;
            const Eigen::VectorXd smoothed =
                p_rev.matrix() * resolvent_solve(p_rev, spec.lambda, v.values);
            return ValueFunction(mdp.reward() +
                                 mdp.gamma() * ((1.0 - spec.beta) * forward +
                                                spec.beta * (1.0 - spec.lambda) * smoothed));
        }
    }
    throw std::logic_error("unreachable regularizer kind");
}

ValueFunction regularized_solve(const TabularMdp& mdp, const StochasticMatrix& p_rev,
                                const RegularizerSpec& spec) {
    const StochasticMatrix m = effective_matrix(mdp.transition(), p_rev, spec);
    const int n = mdp.n_states();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - mdp.gamma() * m.matrix();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd v = lu.solve(mdp.reward());
    const double residual = (a * v - mdp.reward()).cwiseAbs().maxCoeff();
    if (!v.allFinite() || residual > 1e-10)
        throw SingularSystemError("regularized solve residual " + std::to_string(residual));
    return ValueFunction(v);
}

double bias_bound(const TabularMdp& mdp, const StochasticMatrix& p_rev,
                  const RegularizerSpec& spec, int truncation) {
    if (truncation < 1) throw std::invalid_argument("bias_bound: truncation must be >= 1");
    const StochasticMatrix m = effective_matrix(mdp.transition(), p_rev, spec);
    const int n = mdp.n_states();
    const double gamma = mdp.gamma();
    const double r_inf = mdp.reward().cwiseAbs().maxCoeff();

    Eigen::MatrixXd p_pow = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd m_pow = Eigen::MatrixXd::Identity(n, n);
    double sum = 0.0;
    double gamma_pow = 1.0;
    for (int i = 0; i < truncation; ++i) {
        if (i > 0) {
            p_pow = p_pow * mdp.transition().matrix();
            m_pow = m_pow * m.matrix();
            gamma_pow *= gamma;
        }
        sum += gamma_pow * ((p_pow - m_pow) * mdp.reward()).cwiseAbs().maxCoeff();
    }
    const double tail = 2.0 * gamma_pow * gamma * r_inf / (1.0 - gamma);
    return sum + tail;
}

AverageReward average_reward(const StationaryDistribution& mu, const Eigen::VectorXd& reward,
                             double gamma) {
    if (mu.size() != reward.size()) throw DimensionMismatchError("average_reward: size mismatch");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("average_reward: bad gamma");
    const double rho = mu.probs().dot(reward);
    return {rho, rho / (1.0 - gamma)};
}

std::vector<double> regularizer_weights(const RegularizerSpec& spec, int n_terms) {
    spec.validate();
    if (n_terms < 1) throw std::invalid_argument("regularizer_weights: n_terms must be >= 1");
    std::vector<double> w;
    w.reserve(n_terms);
    const double beta = spec.effective_beta();
    w.push_back(1.0 - beta);
    switch (spec.kind) {
        case RegularizerKind::None:
        case RegularizerKind::PreviousState:
            if (n_terms > 1) w.push_back(beta);
            while (static_cast<int>(w.size()) < n_terms) w.push_back(0.0);
            break;
        case RegularizerKind::ExponentialSmoothing: {
            double lam_pow = 1.0;
            for (int i = 1; i < n_terms; ++i) {
                w.push_back(beta * (1.0 - spec.lambda) * lam_pow);
                lam_pow *= spec.lambda;
            }
            break;
        }
    }
    return w;
}

double regularizer_weight_total(const RegularizerSpec& spec, int n_terms) {
    const std::vector<double> w = regularizer_weights(spec, n_terms);
    double total = 0.0;
    for (double x : w) total += x;
    // analytic remainder of the weight sequence beyond the emitted terms
    if (spec.kind == RegularizerKind::ExponentialSmoothing)
        total += spec.effective_beta() * std::pow(spec.lambda, n_terms - 1);
    else if (n_terms < 2)
        total += spec.effective_beta();
    return total;
}

}  // namespace tempreg
