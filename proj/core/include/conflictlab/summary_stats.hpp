#pragma once

#include <Eigen/Core>

namespace conflictlab {

/// Standard normal cdf.
double normal_cdf(double x);

/// Standard normal quantile (Wichura's AS 241 rational approximation,
/// accurate to full double precision). Throws for p outside (0, 1).
double normal_quantile(double p);

/// Linear-interpolation sample quantile (the common "type 7" convention)
/// of an unsorted vector.
double sample_quantile(Eigen::VectorXd values, double p);

/// Robust location/scale/skewness/kurtosis from the seven sample octiles
/// E1..E7: (E4, E6-E2, (E6+E2-2*E4)/(E6-E2), (E7-E5+E3-E1)/(E6-E2)).
/// Throws simulation_failure when E6 == E2 (degenerate data).
Eigen::Vector4d octile_summaries(const Eigen::VectorXd& column);

/// Sample mean, unbiased variance, skewness m3/m2^1.5 and non-excess
/// kurtosis m4/m2^2 with m_k the central sample moments.
/// Throws simulation_failure on zero variance or length < 4.
Eigen::Vector4d moment_summaries(const Eigen::VectorXd& series);

/// Spearman rank correlation with average ranks for ties.
/// Throws simulation_failure when a column is constant.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Spearman correlations of column pairs (1,2), (1,3), (2,3).
Eigen::Vector3d rank_correlations(const Eigen::MatrixXd& data);

}  // namespace conflictlab
