#pragma once

#include <Eigen/Core>
#include <utility>

#include "conflictlab/gaussian_mixture.hpp"
#include "conflictlab/rng.hpp"

namespace conflictlab {

/// Exact KL divergence between multivariate normals,
///   KL(p||q) = 0.5 [ tr(Sq^-1 Sp) + (mq-mp)' Sq^-1 (mq-mp) - d + log det Sq / det Sp ].
/// Throws numeric_error on non-positive-definite covariances.
double kl_gaussian(const Eigen::VectorXd& mean_p, const Eigen::MatrixXd& cov_p,
                   const Eigen::VectorXd& mean_q, const Eigen::MatrixXd& cov_q);

/// Closed-form variational approximation to KL(g||f) for Gaussian mixtures:
///   sum_j w_gj log [ sum_k w_gk exp(-KL(phi_gj||phi_gk))
///                  / sum_l w_fl exp(-KL(phi_gj||phi_fl)) ].
/// Exact for single-component inputs and zero for g == f. The approximation
/// is not guaranteed nonnegative; values are returned as computed, unclamped.
double kl_mixture_variational(const GaussianMixture& g, const GaussianMixture& f);

/// Monte Carlo estimate of KL(g||f) with its standard error, from n draws
/// X ~ g of log g(X) - log f(X). Intended as a test oracle.
std::pair<double, double> kl_monte_carlo(const GaussianMixture& g, const GaussianMixture& f,
                                         int n, Rng& rng);

}  // namespace conflictlab
