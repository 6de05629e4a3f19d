#pragma once

#include <Eigen/Core>

#include "conflictlab/rectangle.hpp"
#include "conflictlab/rng.hpp"

namespace conflictlab {

/// Latin hypercube design over a rectangular region. In every dimension
/// exactly one point falls in each of the n equal-width strata; points sit
/// at stratum centers.
struct LhsDesign {
    Eigen::MatrixXd points;  // n x dim
    /// Minimum pairwise Euclidean distance in the unit-cube scaling
    /// (infinity for a single-point design).
    double criterion_value = 0.0;
};

/// Maximin Latin hypercube: starts from a random centered LHS and applies
/// `iterations` random within-column transposition proposals, keeping the
/// design whenever the minimum pairwise distance improves.
LhsDesign lhs_maximin(const Rectangle& region, int n, int iterations, Rng& rng);

}  // namespace conflictlab
