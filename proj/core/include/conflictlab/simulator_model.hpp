#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <utility>

#include "conflictlab/gaussian_mixture.hpp"
#include "conflictlab/rectangle.hpp"
#include "conflictlab/rng.hpp"

namespace conflictlab {

/// Simulator interface used by the conflict check and the weak-informativity
/// search: a prior family p(theta|gamma) indexed by an expansion parameter
/// gamma, and a summary-statistic simulator p(z|theta). Implementations are
/// stateless given an explicit generator.
class SimulatorModel {
public:
    virtual ~SimulatorModel() = default;

    virtual std::string name() const = 0;
    virtual int theta_dim() const = 0;
    virtual int summary_dim() const = 0;
    virtual int gamma_dim() const = 0;

    /// Search region for gamma; also the support of the uniform pseudo-prior.
    virtual Rectangle gamma_region() const = 0;
    /// Expansion value reproducing the base prior.
    virtual Eigen::VectorXd gamma0() const = 0;

    /// True when p(theta|gamma) is Gaussian with analytic parameters.
    virtual bool prior_is_gaussian() const = 0;
    /// Exact prior as a (single component) mixture; only valid when
    /// prior_is_gaussian() is true.
    virtual GaussianMixture analytic_prior(const Eigen::VectorXd& gamma) const;

    /// Uniform draw from the pseudo-prior over gamma_region.
    virtual Eigen::VectorXd sample_gamma(Rng& rng) const;
    virtual Eigen::VectorXd sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const = 0;
    /// Summary simulation; may throw simulation_failure for degenerate draws.
    virtual Eigen::VectorXd simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const = 0;

    /// One (theta, z) pair from p(theta|gamma) p(z|theta), redrawing both on
    /// simulation failure (up to an internal retry cap).
    virtual std::pair<Eigen::VectorXd, Eigen::VectorXd> draw_joint(const Eigen::VectorXd& gamma,
                                                                   Rng& rng) const;
};

}  // namespace conflictlab
