#pragma once

#include <Eigen/Core>

#include "conflictlab/simulator_model.hpp"

namespace conflictlab::models {

/// Four independent Binomial(trials, p_i) death counts with
/// logit(p_i) = theta_1 + theta_2 * dose_i.
Eigen::Vector4d logistic_simulate(const Eigen::Vector2d& theta, const Eigen::Vector4d& doses,
                                  int trials, Rng& rng);

/// Dose-response bioassay with independent N(0, gamma_j^2) priors on the
/// intercept and slope. Summaries are the raw count 4-vector.
class LogisticBioassay : public SimulatorModel {
public:
    /// Standardized doses: the canonical log-transformed, centred values of
    /// the four-dose bioassay design. Configurable.
    LogisticBioassay();
    LogisticBioassay(Eigen::Vector4d doses, int trials);

    std::string name() const override { return "logistic"; }
    int theta_dim() const override { return 2; }
    int summary_dim() const override { return 4; }
    int gamma_dim() const override { return 2; }
    Rectangle gamma_region() const override;
    Eigen::VectorXd gamma0() const override;
    bool prior_is_gaussian() const override { return true; }
    GaussianMixture analytic_prior(const Eigen::VectorXd& gamma) const override;
    Eigen::VectorXd sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const override;
    Eigen::VectorXd simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const override;

    const Eigen::Vector4d& doses() const { return doses_; }
    int trials() const { return trials_; }

private:
    Eigen::Vector4d doses_;
    int trials_;
};

}  // namespace conflictlab::models
