#pragma once

#include <Eigen/Core>
#include <utility>

#include "conflictlab/simulator_model.hpp"

namespace conflictlab::models {

/// Parameters of the recruitment boom-and-bust population model.
struct BoomBustParams {
    double growth = 0.0;       // r >= 0
    double threshold = 0.0;    // kappa
    double survival = 0.0;     // alpha in [0,1]
    double recruitment = 0.0;  // beta >= 0

    void validate() const;
};

/// Population series: starting from N_0 = floor(kappa),
///   N_{t+1} ~ Poisson(N_t (1+r)) + eps_t   if N_t <= kappa,
///   N_{t+1} ~ Binomial(N_t, alpha) + eps_t otherwise,
/// with eps_t ~ Poisson(beta). Returns `length` values after `burnin`
/// discarded steps. Values are nonnegative integers stored as doubles.
Eigen::VectorXd boombust_series(const BoomBustParams& params, int length, int burnin, Rng& rng);

/// Twelve summaries: mean, variance, skewness, kurtosis of the series x, of
/// its differences d_x and of its ratios r_x (ratio pairs with zero
/// denominator are dropped; fewer than 4 surviving pairs or a zero-variance
/// block raises simulation_failure).
Eigen::VectorXd boombust_summaries(const Eigen::VectorXd& series);

/// Series of length 250 after 50 burn-in steps plus its summary vector.
std::pair<Eigen::VectorXd, Eigen::VectorXd> boombust_simulate(const BoomBustParams& params,
                                                              Rng& rng);

/// Boom-and-bust model checked on the growth parameter r with prior
/// Beta(gamma, gamma); threshold, survival and recruitment keep their
/// uniform priors on [10,80] x [0,1] x [0,1] and are integrated out by
/// simulation.
class BoomBust : public SimulatorModel {
public:
    BoomBust() = default;

    std::string name() const override { return "boombust"; }
    int theta_dim() const override { return 1; }
    int summary_dim() const override { return 12; }
    int gamma_dim() const override { return 1; }
    Rectangle gamma_region() const override { return Rectangle::interval(0.2, 9.0); }
    Eigen::VectorXd gamma0() const override { return Eigen::VectorXd::Constant(1, 5.0); }
    bool prior_is_gaussian() const override { return false; }
    Eigen::VectorXd sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const override;
    Eigen::VectorXd simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const override;

    BoomBustParams sample_nuisance(double r, Rng& rng) const;

    /// Full parameter vector (r, kappa, alpha, beta) and the 12 summaries.
    std::pair<Eigen::VectorXd, Eigen::VectorXd> simulate_full(const Eigen::VectorXd& gamma,
                                                              Rng& rng) const;
};

/// Beta(a, b) draw via two gamma variates.
double sample_beta(double a, double b, Rng& rng);

}  // namespace conflictlab::models
