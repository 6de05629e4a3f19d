#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <vector>

#include "conflictlab/rng.hpp"

namespace conflictlab {

/// Finite mixture of multivariate normals. Immutable after construction and
/// safe to share across threads for concurrent reads.
///
/// Invariants enforced at construction: weights are nonnegative and sum to 1
/// within 1e-12, covariances are symmetric within 1e-10 and positive definite,
/// and all components share one dimension.
class GaussianMixture {
public:
    GaussianMixture(std::vector<double> weights,
                    std::vector<Eigen::VectorXd> means,
                    std::vector<Eigen::MatrixXd> covariances);

    int dimension() const { return dim_; }
    int components() const { return static_cast<int>(weights_.size()); }

    const std::vector<double>& weights() const { return weights_; }
    const Eigen::VectorXd& mean(int j) const { return means_[j]; }
    const Eigen::MatrixXd& covariance(int j) const { return covariances_[j]; }
    /// Lower Cholesky factor of component j's covariance.
    const Eigen::MatrixXd& cholesky(int j) const { return chol_[j]; }
    double log_det_covariance(int j) const { return log_det_[j]; }

    /// Mixture mean, sum_j w_j mu_j.
    Eigen::VectorXd mean() const;

    /// log sum_j w_j phi(x; mu_j, Sigma_j), evaluated in log space.
    double log_density(const Eigen::VectorXd& x) const;

    /// n i.i.d. draws, one per row.
    Eigen::MatrixXd sample(int n, Rng& rng) const;

    /// Conditional mixture of the free coordinates given observed ones.
    GaussianMixture condition(const std::vector<int>& observed_indices,
                              const Eigen::VectorXd& observed_values) const;

    /// Marginal mixture over the kept coordinates; weights are unchanged.
    GaussianMixture marginal(const std::vector<int>& kept_indices) const;

private:
    int dim_ = 0;
    std::vector<double> weights_;
    std::vector<Eigen::VectorXd> means_;
    std::vector<Eigen::MatrixXd> covariances_;
    std::vector<Eigen::MatrixXd> chol_;
    std::vector<double> log_det_;
};

/// Precomputed conditioning of a mixture on a fixed set of observed
/// coordinates. Amortizes the Schur complements and observed-block Cholesky
/// factors across many conditioning values, which is the hot path when one
/// fitted joint approximation serves thousands of replicate summaries.
class MixtureConditioner {
public:
    MixtureConditioner(const GaussianMixture& mixture, std::vector<int> observed_indices);

    /// Conditional mixture at the given observed values; component weights
    /// are computed in log space and renormalized.
    GaussianMixture condition(const Eigen::VectorXd& observed_values) const;

    /// Smallest Mahalanobis distance from the observed values to a component
    /// of the observed-block marginal. Diagnostic for extrapolation.
    double min_mahalanobis(const Eigen::VectorXd& observed_values) const;

    int observed_dim() const { return static_cast<int>(observed_.size()); }
    int free_dim() const { return static_cast<int>(free_.size()); }

private:
    struct Component {
        Eigen::VectorXd mu_obs;
        Eigen::VectorXd mu_free;
        Eigen::MatrixXd chol_obs;      // lower Cholesky of Sigma_obs
        Eigen::MatrixXd gain;          // Sigma_free,obs Sigma_obs^{-1}
        Eigen::MatrixXd cond_cov;      // Sigma_free - gain Sigma_obs,free
        double log_norm;               // log normal constant of phi_j(z)
        double log_weight;
    };

    std::vector<int> observed_;
    std::vector<int> free_;
    std::vector<Component> components_;
};

}  // namespace conflictlab
