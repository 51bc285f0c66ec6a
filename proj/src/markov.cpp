#include "tempreg/markov.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace tempreg {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kEntryTol = 1e-12;

void format_scientific(std::ostream& out, double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    out.write(buf, res.ptr - buf);
}

}  // namespace

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw DimensionMismatchError("stochastic matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < m_.cols(); ++j) {
            const double e = m_(i, j);
            if (!std::isfinite(e) || e < -kEntryTol || e > 1.0 + kEntryTol)
                throw std::invalid_argument("stochastic matrix entry outside [0, 1] at (" +
                                            std::to_string(i) + ", " + std::to_string(j) + ")");
            row_sum += e;
        }
        if (std::abs(row_sum - 1.0) > kRowSumTol)
            throw std::invalid_argument("stochastic matrix row " + std::to_string(i) +
                                        " sums to " + std::to_string(row_sum));
    }
}

StationaryDistribution::StationaryDistribution(Eigen::VectorXd probs) : p_(std::move(probs)) {
    if (p_.size() == 0) throw DimensionMismatchError("empty stationary distribution");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
        if (!std::isfinite(p_(i)) || p_(i) < -kEntryTol)
            throw std::invalid_argument("stationary distribution entry negative at " +
                                        std::to_string(i));
        sum += p_(i);
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
        throw std::invalid_argument("stationary distribution sums to " + std::to_string(sum));
}

StationaryDistribution stationary_distribution_power(const StochasticMatrix& m, double tol,
                                                     int max_iters) {
    const int n = m.size();
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Constant(n, 1.0 / n);
    for (int it = 0; it < max_iters; ++it) {
        Eigen::RowVectorXd next = mu * m.matrix();
        next /= next.sum();
        const double residual = (next - mu).cwiseAbs().sum();
        if (residual <= tol) return StationaryDistribution(mu.transpose());
        mu = next;
    }
    throw NonConvergenceError("power iteration did not reach tol " + std::to_string(tol) +
                              " within " + std::to_string(max_iters) + " iterations");
}

StationaryDistribution stationary_distribution(const StochasticMatrix& m, double tol,
                                               int max_iters) {
    try {
        return stationary_distribution_power(m, tol, max_iters);
    } catch (const NonConvergenceError&) {
        // Direct route: least squares on (M^T - I) mu = 0 stacked with sum(mu) = 1.
        const int n = m.size();
        Eigen::MatrixXd a(n + 1, n);
        a.topRows(n) = m.matrix().transpose() - Eigen::MatrixXd::Identity(n, n);
        a.bottomRows(1).setOnes();
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
        b(n) = 1.0;
        Eigen::VectorXd mu = a.colPivHouseholderQr().solve(b);
        mu /= mu.sum();
        const double residual = (mu.transpose() * m.matrix() - mu.transpose()).cwiseAbs().sum();
        if (residual > tol || mu.minCoeff() < -kEntryTol)
            throw NonConvergenceError("no stationary distribution within tol " +
                                      std::to_string(tol) + " (direct solve residual " +
                                      std::to_string(residual) + ")");
        return StationaryDistribution((mu.array() < 0.0).select(0.0, mu.array()));
    }
}

StochasticMatrix reversal(const StochasticMatrix& m, const StationaryDistribution& mu) {
    if (mu.size() != m.size()) throw DimensionMismatchError("mu size does not match matrix");
    const int n = m.size();
    for (int i = 0; i < n; ++i)
        if (mu[i] <= 1e-15)
            throw ZeroMassError("stationary probability of state " + std::to_string(i) +
                                " is zero; reversal undefined");
    Eigen::MatrixXd rev(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rev(i, j) = mu[j] * m(j, i) / mu[i];
    for (int i = 0; i < n; ++i) rev.row(i) /= rev.row(i).sum();
    return StochasticMatrix(std::move(rev));
}

bool is_reversible(const StochasticMatrix& m, const StationaryDistribution& mu, double tol) {
    if (mu.size() != m.size()) throw DimensionMismatchError("mu size does not match matrix");
    const int n = m.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(mu[i] * m(i, j) - mu[j] * m(j, i)) > tol) return false;
    return true;
}

StochasticMatrix mix(const StochasticMatrix& p, const StochasticMatrix& p_rev, double beta) {
    if (p.size() != p_rev.size()) throw DimensionMismatchError("mix: dimension mismatch");
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("mix: beta outside [0, 1]");
    return StochasticMatrix((1.0 - beta) * p.matrix() + beta * p_rev.matrix());
}

MixingCurve mixing_error_curves(const StochasticMatrix& m, const StationaryDistribution& mu,
                                int iters) {
    if (iters < 1) throw std::invalid_argument("mixing_error_curves: iters must be >= 1");
    const int n = m.size();
    const Eigen::MatrixXd p_inf = Eigen::VectorXd::Ones(n) * mu.probs().transpose();
    MixingCurve curve;
    curve.max_abs.reserve(iters);
    curve.frobenius.reserve(iters);
    Eigen::MatrixXd power = m.matrix();
    for (int k = 0; k < iters; ++k) {
        const Eigen::MatrixXd diff = power - p_inf;
        curve.max_abs.push_back(diff.cwiseAbs().maxCoeff());
        curve.frobenius.push_back(diff.norm());
        if (k + 1 < iters) power = power * m.matrix();
    }
    return curve;
}

std::vector<double> mixing_error_curve(const StochasticMatrix& m, const StationaryDistribution& mu,
                                       int iters) {
    return mixing_error_curves(m, mu, iters).max_abs;
}

void write_matrix(std::ostream& out, const StochasticMatrix& m) {
    const int n = m.size();
    out << n << '\n';
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ' ';
            format_scientific(out, m(i, j));
        }
        out << '\n';
    }
}

StochasticMatrix read_matrix(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n <= 0) throw std::runtime_error("matrix file: bad or missing dimension");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(in >> m(i, j)))
                throw std::runtime_error("matrix file: truncated at row " + std::to_string(i));
    return StochasticMatrix(std::move(m));
}

}  // namespace tempreg
