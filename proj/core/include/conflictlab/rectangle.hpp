#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace conflictlab {

/// Axis-aligned search region with per-dimension bounds.
struct Rectangle {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    Rectangle() = default;
    Rectangle(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size()) {
            throw std::invalid_argument("Rectangle: bound dimensions differ");
        }
        for (Eigen::Index i = 0; i < lower.size(); ++i) {
            if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
                throw std::invalid_argument("Rectangle: bounds must be finite with lower < upper");
            }
        }
    }

    static Rectangle interval(double lo, double hi) {
        Eigen::VectorXd l(1), u(1);
        l << lo;
        u << hi;
        return Rectangle(l, u);
    }

    int dim() const { return static_cast<int>(lower.size()); }

    bool contains(const Eigen::VectorXd& x) const {
        if (x.size() != lower.size()) return false;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < lower[i] || x[i] > upper[i]) return false;
        }
        return true;
    }
};

}  // namespace conflictlab
