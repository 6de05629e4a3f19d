#include "conflictlab/lhs.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace conflictlab {

namespace {

double min_pairwise_distance(const Eigen::MatrixXd& unit) {
    const Eigen::Index n = unit.rows();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            best = std::min(best, (unit.row(i) - unit.row(j)).squaredNorm());
        }
    }
    return std::sqrt(best);
}

}  // namespace

LhsDesign lhs_maximin(const Rectangle& region, int n, int iterations, Rng& rng) {
    if (n < 1) throw std::invalid_argument("lhs_maximin: n must be >= 1");
    if (iterations < 1) throw std::invalid_argument("lhs_maximin: iterations must be >= 1");
    const int dim = region.dim();
    if (dim < 1) throw std::invalid_argument("lhs_maximin: empty region");

    // Centered unit-cube design: column j visits stratum centers (perm + 0.5)/n.
    Eigen::MatrixXd unit(n, dim);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int c = 0; c < dim; ++c) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < n; ++i) {
            unit(i, c) = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + 0.5) /
                         static_cast<double>(n);
        }
    }

    double best = min_pairwise_distance(unit);
    if (n > 1) {
        std::uniform_int_distribution<int> pick_col(0, dim - 1);
        std::uniform_int_distribution<int> pick_row(0, n - 1);
        for (int it = 0; it < iterations; ++it) {
            const int c = pick_col(rng);
            const int a = pick_row(rng);
            const int b = pick_row(rng);
            if (a == b) continue;
            std::swap(unit(a, c), unit(b, c));
            const double cand = min_pairwise_distance(unit);
            if (cand > best) {
                best = cand;
            } else {
                std::swap(unit(a, c), unit(b, c));
            }
        }
    }

    LhsDesign out;
    out.points.resize(n, dim);
    for (int c = 0; c < dim; ++c) {
        out.points.col(c) =
            region.lower[c] + (region.upper[c] - region.lower[c]) * unit.col(c).array();
    }
    out.criterion_value = best;
    return out;
}

}  // namespace conflictlab
