#include "conflictlab/divergence.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "conflictlab/errors.hpp"

namespace conflictlab {

namespace {

double log_sum_exp(const Eigen::VectorXd& v) {
    const double m = v.maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

/// KL between components j of g and l of f using the precomputed Cholesky
/// factors stored in the mixtures.
double kl_components(const GaussianMixture& g, int j, const GaussianMixture& f, int l) {
    const int d = g.dimension();
    const Eigen::MatrixXd& lp = g.cholesky(j);
    const Eigen::MatrixXd& lq = f.cholesky(l);
    const Eigen::MatrixXd a = lq.triangularView<Eigen::Lower>().solve(lp);
    const Eigen::VectorXd y = lq.triangularView<Eigen::Lower>().solve(f.mean(l) - g.mean(j));
    const double kl =
        0.5 * (a.squaredNorm() + y.squaredNorm() - d + f.log_det_covariance(l) - g.log_det_covariance(j));
    return std::max(kl, 0.0);
}

}  // namespace

double kl_gaussian(const Eigen::VectorXd& mean_p, const Eigen::MatrixXd& cov_p,
                   const Eigen::VectorXd& mean_q, const Eigen::MatrixXd& cov_q) {
    const Eigen::Index d = mean_p.size();
    if (mean_q.size() != d || cov_p.rows() != d || cov_p.cols() != d || cov_q.rows() != d ||
        cov_q.cols() != d) {
        throw std::invalid_argument("kl_gaussian: dimension mismatch");
    }
    Eigen::LLT<Eigen::MatrixXd> lltp(cov_p);
    Eigen::LLT<Eigen::MatrixXd> lltq(cov_q);
    if (lltp.info() != Eigen::Success || lltq.info() != Eigen::Success) {
        throw numeric_error("kl_gaussian: covariance not positive definite");
    }
    const Eigen::MatrixXd lp = lltp.matrixL();
    const Eigen::MatrixXd lq = lltq.matrixL();
    // tr(Sq^-1 Sp) = ||Lq^-1 Lp||_F^2
    const Eigen::MatrixXd a = lq.triangularView<Eigen::Lower>().solve(lp);
    const Eigen::VectorXd y = lq.triangularView<Eigen::Lower>().solve(mean_q - mean_p);
    double log_det_ratio = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) log_det_ratio += std::log(lq(i, i)) - std::log(lp(i, i));
    const double kl = 0.5 * (a.squaredNorm() + y.squaredNorm() - static_cast<double>(d)) + log_det_ratio;
    return std::max(kl, 0.0);
}

double kl_mixture_variational(const GaussianMixture& g, const GaussianMixture& f) {
    if (g.dimension() != f.dimension()) {
        throw std::invalid_argument("kl_mixture_variational: dimension mismatch");
    }
    const int jg = g.components();
    const int jf = f.components();
    double total = 0.0;
    Eigen::VectorXd num(jg), den(jf);
    for (int j = 0; j < jg; ++j) {
        const double wj = g.weights()[static_cast<std::size_t>(j)];
        if (wj <= 0.0) continue;
        for (int k = 0; k < jg; ++k) {
            const double wk = g.weights()[static_cast<std::size_t>(k)];
            num[k] = wk > 0.0 ? std::log(wk) - kl_components(g, j, g, k)
                              : -std::numeric_limits<double>::infinity();
        }
        for (int l = 0; l < jf; ++l) {
            const double wl = f.weights()[static_cast<std::size_t>(l)];
            den[l] = wl > 0.0 ? std::log(wl) - kl_components(g, j, f, l)
                              : -std::numeric_limits<double>::infinity();
        }
        total += wj * (log_sum_exp(num) - log_sum_exp(den));
    }
    return total;
}

std::pair<double, double> kl_monte_carlo(const GaussianMixture& g, const GaussianMixture& f,
                                         int n, Rng& rng) {
    if (g.dimension() != f.dimension()) {
        throw std::invalid_argument("kl_monte_carlo: dimension mismatch");
    }
    if (n < 1000) throw std::invalid_argument("kl_monte_carlo: n must be >= 1000");
    const Eigen::MatrixXd draws = g.sample(n, rng);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd x = draws.row(i).transpose();
        const double d = g.log_density(x) - f.log_density(x);
        sum += d;
        sumsq += d * d;
    }
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

}  // namespace conflictlab
