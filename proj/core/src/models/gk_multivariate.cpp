#include "conflictlab/models/gk_multivariate.hpp"

#include <cmath>
#include <stdexcept>

#include "conflictlab/errors.hpp"
#include "conflictlab/summary_stats.hpp"

namespace conflictlab::models {

void GkParams::validate() const {
    if (!(scale > 0.0)) throw std::invalid_argument("GkParams: scale B must be > 0");
    if (!(kurtosis > -0.5)) throw std::invalid_argument("GkParams: kurtosis k must be > -0.5");
    if (!std::isfinite(location) || !std::isfinite(skewness)) {
        throw std::invalid_argument("GkParams: parameters must be finite");
    }
}

double gk_quantile(double p, const GkParams& params) {
    params.validate();
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gk_quantile: p must be in (0,1)");
    const double z = normal_quantile(p);
    const double skew_factor = 1.0 + GkParams::c * std::tanh(0.5 * params.skewness * z);
    return params.location +
           params.scale * skew_factor * std::pow(1.0 + z * z, params.kurtosis) * z;
}

Eigen::Matrix3d spherical_cholesky(const Eigen::Vector3d& w) {
    if (!w.allFinite()) throw std::invalid_argument("spherical_cholesky: w must be finite");
    const double pi = 3.14159265358979323846;
    Eigen::Vector3d a;
    for (int j = 0; j < 3; ++j) a[j] = pi / (1.0 + std::exp(-w[j]));
    Eigen::Matrix3d l = Eigen::Matrix3d::Zero();
    l(0, 0) = 1.0;
    l(1, 0) = std::cos(a[0]);
    l(1, 1) = std::sin(a[0]);
    l(2, 0) = std::cos(a[1]);
    l(2, 1) = std::sin(a[1]) * std::cos(a[2]);
    l(2, 2) = std::sin(a[1]) * std::sin(a[2]);
    return l;
}

Eigen::Matrix3d spherical_to_correlation(const Eigen::Vector3d& w) {
    const Eigen::Matrix3d l = spherical_cholesky(w);
    return l * l.transpose();
}

Eigen::MatrixXd gk_mv_simulate(const std::array<GkParams, 3>& margins, const Eigen::Vector3d& w,
                               int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("gk_mv_simulate: n must be >= 1");
    for (const GkParams& m : margins) m.validate();
    const Eigen::Matrix3d l = spherical_cholesky(w);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double u_lo = std::numeric_limits<double>::min();
    const double u_hi = std::nextafter(1.0, 0.0);
    Eigen::MatrixXd out(n, 3);
    for (int i = 0; i < n; ++i) {
        Eigen::Vector3d z;
        for (int j = 0; j < 3; ++j) z[j] = gauss(rng);
        const Eigen::Vector3d x = l * z;
        for (int j = 0; j < 3; ++j) {
            const double u = std::clamp(normal_cdf(x[j]), u_lo, u_hi);
            out(i, j) = gk_quantile(u, margins[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

GkMultivariate::GkMultivariate(int observations_per_dataset) : n_obs_(observations_per_dataset) {
    if (n_obs_ < 8) throw std::invalid_argument("GkMultivariate: need at least 8 observations per dataset");
}

Eigen::VectorXd GkMultivariate::gamma0() const {
    return Eigen::VectorXd::Constant(1, 0.5);
}

GaussianMixture GkMultivariate::analytic_prior(const Eigen::VectorXd& gamma) const {
    if (gamma.size() != 1) throw std::invalid_argument("gk_mv: gamma must be scalar");
    const double v = gamma[0] * gamma[0];
    return GaussianMixture({1.0}, {Eigen::VectorXd::Zero(3)},
                           {Eigen::MatrixXd::Identity(3, 3) * v});
}

Eigen::VectorXd GkMultivariate::sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const {
    if (gamma.size() != 1) throw std::invalid_argument("gk_mv: gamma must be scalar");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd w(3);
    for (int j = 0; j < 3; ++j) w[j] = gamma[0] * gauss(rng);
    return w;
}

std::array<GkParams, 3> GkMultivariate::sample_margins(Rng& rng) const {
    std::uniform_real_distribution<double> ua(-0.1, 0.1);
    std::uniform_real_distribution<double> ub(0.0, 0.05);
    std::uniform_real_distribution<double> ug(-1.0, 1.0);
    std::uniform_real_distribution<double> uk(-0.2, 0.5);
    std::array<GkParams, 3> margins;
    for (auto& m : margins) {
        m.location = ua(rng);
        do {
            m.scale = ub(rng);
        } while (!(m.scale > 0.0));
        m.skewness = ug(rng);
        m.kurtosis = uk(rng);
    }
    return margins;
}

Eigen::VectorXd GkMultivariate::simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const {
    if (theta.size() != 3) throw std::invalid_argument("gk_mv: theta must be the 3-vector w");
    const std::array<GkParams, 3> margins = sample_margins(rng);
    const Eigen::MatrixXd data = gk_mv_simulate(margins, theta.head<3>(), n_obs_, rng);
    return rank_correlations(data);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> GkMultivariate::simulate_full(
    const Eigen::VectorXd& gamma, Rng& rng) const {
    const std::array<GkParams, 3> margins = sample_margins(rng);
    const Eigen::VectorXd w = sample_theta(gamma, rng);
    const Eigen::MatrixXd data = gk_mv_simulate(margins, w.head<3>(), n_obs_, rng);

    Eigen::VectorXd theta(15);
    for (int j = 0; j < 3; ++j) {
        const auto& m = margins[static_cast<std::size_t>(j)];
        theta.segment<4>(4 * j) << m.location, m.scale, m.skewness, m.kurtosis;
    }
    theta.tail<3>() = w;

    Eigen::VectorXd summary(15);
    for (int j = 0; j < 3; ++j) summary.segment<4>(4 * j) = octile_summaries(data.col(j));
    summary.tail<3>() = rank_correlations(data);
    return {std::move(theta), std::move(summary)};
}

}  // namespace conflictlab::models
