#include "tempreg/mdp.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "tempreg/errors.hpp"

namespace tempreg {

TabularMdp::TabularMdp(StochasticMatrix transition, Eigen::VectorXd reward, double gamma)
    : transition_(std::move(transition)), reward_(std::move(reward)), gamma_(gamma) {
    if (reward_.size() != transition_.size())
        throw DimensionMismatchError("reward vector size does not match transition matrix");
    if (!(gamma_ >= 0.0 && gamma_ < 1.0))
        throw std::invalid_argument("gamma must lie in [0, 1), got " + std::to_string(gamma_));
    if (!reward_.allFinite()) throw std::invalid_argument("reward vector has non-finite entries");
}

ValueFunction bellman_apply(const TabularMdp& mdp, const ValueFunction& v) {
    if (v.size() != mdp.n_states())
        throw DimensionMismatchError("value function size does not match MDP");
    return ValueFunction(mdp.reward() + mdp.gamma() * (mdp.transition().matrix() * v.values));
}

ValueFunction solve_exact(const TabularMdp& mdp) {
    const int n = mdp.n_states();
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(n, n) - mdp.gamma() * mdp.transition().matrix();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd v = lu.solve(mdp.reward());
    const double residual = (a * v - mdp.reward()).cwiseAbs().maxCoeff();
    if (!v.allFinite() || residual > 1e-10)
        throw SingularSystemError("Bellman solve residual " + std::to_string(residual));
    return ValueFunction(v);
}

int sample_transition(const StochasticMatrix& m, int state, RngStream& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    const int n = m.size();
    for (int j = 0; j < n; ++j) {
        acc += m(state, j);
        if (u < acc) return j;
    }
    return n - 1;  // guard against row sums a hair below 1
}

std::vector<std::pair<int, double>> sample_trajectory(const TabularMdp& mdp, int start, int steps,
                                                      RngStream& rng) {
    if (start < 0 || start >= mdp.n_states())
        throw std::invalid_argument("sample_trajectory: invalid start state");
    std::vector<std::pair<int, double>> traj;
    traj.reserve(steps + 1);
    int s = start;
    traj.emplace_back(s, mdp.reward()(s));
    for (int t = 0; t < steps; ++t) {
        s = sample_transition(mdp.transition(), s, rng);
        traj.emplace_back(s, mdp.reward()(s));
    }
    return traj;
}

void write_mdp(std::ostream& out, const TabularMdp& mdp) {
    out << mdp.n_states() << '\n';
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), mdp.gamma(), std::chars_format::scientific, 16);
    out.write(buf, res.ptr - buf);
    out << '\n';
    for (int i = 0; i < mdp.n_states(); ++i) {
        if (i) out << ' ';
        res = std::to_chars(buf, buf + sizeof(buf), mdp.reward()(i), std::chars_format::scientific, 16);
        out.write(buf, res.ptr - buf);
    }
    out << '\n';
    write_matrix(out, mdp.transition());
}

TabularMdp read_mdp(std::istream& in) {
    int n = 0;
    double gamma = 0.0;
    if (!(in >> n) || n <= 0) throw std::runtime_error("mdp file: bad or missing state count");
    if (!(in >> gamma)) throw std::runtime_error("mdp file: bad or missing gamma");
    Eigen::VectorXd reward(n);
    for (int i = 0; i < n; ++i)
        if (!(in >> reward(i))) throw std::runtime_error("mdp file: truncated reward vector");
    StochasticMatrix transition = read_matrix(in);
    if (transition.size() != n)
        throw std::runtime_error("mdp file: transition dimension does not match state count");
    return TabularMdp(std::move(transition), std::move(reward), gamma);
}

}  // namespace tempreg
