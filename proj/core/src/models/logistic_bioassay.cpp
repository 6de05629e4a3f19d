#include "conflictlab/models/logistic_bioassay.hpp"

#include <cmath>
#include <stdexcept>

namespace conflictlab::models {

Eigen::Vector4d logistic_simulate(const Eigen::Vector2d& theta, const Eigen::Vector4d& doses,
                                  int trials, Rng& rng) {
    if (!theta.allFinite()) throw std::invalid_argument("logistic_simulate: theta must be finite");
    Eigen::Vector4d counts;
    for (int i = 0; i < 4; ++i) {
        const double logit = theta[0] + theta[1] * doses[i];
        const double p = 1.0 / (1.0 + std::exp(-logit));
        std::binomial_distribution<int> binom(trials, p);
        counts[i] = static_cast<double>(binom(rng));
    }
    return counts;
}

LogisticBioassay::LogisticBioassay()
    : LogisticBioassay((Eigen::Vector4d() << -0.86, -0.30, -0.05, 0.73).finished(), 20) {}

LogisticBioassay::LogisticBioassay(Eigen::Vector4d doses, int trials)
    : doses_(std::move(doses)), trials_(trials) {
    if (trials_ < 1) throw std::invalid_argument("LogisticBioassay: trials must be >= 1");
}

Rectangle LogisticBioassay::gamma_region() const {
    return Rectangle((Eigen::Vector2d() << 0.5, 0.5).finished(),
                     (Eigen::Vector2d() << 10.0, 20.0).finished());
}

Eigen::VectorXd LogisticBioassay::gamma0() const { return Eigen::Vector2d::Ones(); }

GaussianMixture LogisticBioassay::analytic_prior(const Eigen::VectorXd& gamma) const {
    if (gamma.size() != 2) throw std::invalid_argument("logistic: gamma must have 2 entries");
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = gamma[0] * gamma[0];
    cov(1, 1) = gamma[1] * gamma[1];
    return GaussianMixture({1.0}, {Eigen::VectorXd::Zero(2)}, {cov});
}

Eigen::VectorXd LogisticBioassay::sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const {
    if (gamma.size() != 2) throw std::invalid_argument("logistic: gamma must have 2 entries");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd theta(2);
    theta[0] = gamma[0] * gauss(rng);
    theta[1] = gamma[1] * gauss(rng);
    return theta;
}

Eigen::VectorXd LogisticBioassay::simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const {
    if (theta.size() != 2) throw std::invalid_argument("logistic: theta must have 2 entries");
    return logistic_simulate(theta.head<2>(), doses_, trials_, rng);
}

}  // namespace conflictlab::models
