#pragma once

#include <Eigen/Core>
#include <array>

#include "conflictlab/simulator_model.hpp"

namespace conflictlab::models {

/// Location, scale, skewness and kurtosis parameters of a g-and-k
/// distribution; c is conventionally fixed at 0.8, giving k > -0.5.
struct GkParams {
    double location = 0.0;   // A
    double scale = 1.0;      // B > 0
    double skewness = 0.0;   // g
    double kurtosis = 0.0;   // k > -0.5

    static constexpr double c = 0.8;

    void validate() const;
};

/// Quantile function
///   Q(p) = A + B (1 + c tanh(g z(p) / 2)) (1 + z(p)^2)^k z(p),  z(p) = Phi^{-1}(p).
/// The tanh form keeps the skew factor bounded for any g z(p) and resolves
/// g = 0 to a factor of exactly 1.
double gk_quantile(double p, const GkParams& params);

/// Correlation matrix from the spherical parametrization: the Cholesky
/// factor L has rows (1,0,0), (cos a1, sin a1, 0),
/// (cos a2, sin a2 cos a3, sin a2 sin a3) with a_j = pi/(1+exp(-w_j)),
/// and C = L L'. Always a valid correlation matrix.
Eigen::Matrix3d spherical_to_correlation(const Eigen::Vector3d& w);

/// Lower Cholesky factor of spherical_to_correlation(w).
Eigen::Matrix3d spherical_cholesky(const Eigen::Vector3d& w);

/// n rows from the trivariate g-and-k model: Z ~ N(0, C(w)) mapped through
/// Phi and the marginal quantile functions.
Eigen::MatrixXd gk_mv_simulate(const std::array<GkParams, 3>& margins, const Eigen::Vector3d& w,
                               int n, Rng& rng);

/// Trivariate g-and-k model with a Gaussian copula. The checked parameter is
/// the unconstrained correlation vector w with prior N(0, gamma^2 I_3); the
/// twelve marginal g-and-k parameters keep their uniform priors and are
/// integrated out by simulation. Summaries are the three pairwise rank
/// correlations.
class GkMultivariate : public SimulatorModel {
public:
    explicit GkMultivariate(int observations_per_dataset = 250);

    std::string name() const override { return "gk_mv"; }
    int theta_dim() const override { return 3; }
    int summary_dim() const override { return 3; }
    int gamma_dim() const override { return 1; }
    Rectangle gamma_region() const override { return Rectangle::interval(0.5, 5.0); }
    Eigen::VectorXd gamma0() const override;
    bool prior_is_gaussian() const override { return true; }
    GaussianMixture analytic_prior(const Eigen::VectorXd& gamma) const override;
    Eigen::VectorXd sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const override;
    Eigen::VectorXd simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const override;

    int observations_per_dataset() const { return n_obs_; }

    /// Marginal parameters drawn from the uniform priors of the exchange-rate
    /// analysis: A ~ U[-0.1,0.1], B ~ U[0,0.05], g ~ U[-1,1], k ~ U[-0.2,0.5].
    std::array<GkParams, 3> sample_margins(Rng& rng) const;

    /// Full parameter vector (A_j, B_j, g_j, k_j for j = 1..3, then w) and the
    /// fifteen summaries (four octile statistics per margin plus the three
    /// rank correlations).
    std::pair<Eigen::VectorXd, Eigen::VectorXd> simulate_full(const Eigen::VectorXd& gamma,
                                                              Rng& rng) const;

private:
    int n_obs_;
};

}  // namespace conflictlab::models
