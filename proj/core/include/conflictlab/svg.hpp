#pragma once

#include <Eigen/Core>
#include <string>

namespace conflictlab {

/// Line plot of (x, y) pairs sorted by x; y is labeled "W_alpha".
std::string svg_line_plot(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const std::string& x_label);

/// Filled heatmap of values on a rectangular grid (one rect per cell) with a
/// colorbar. xs/ys are the sorted distinct axis values; values(i, j)
/// corresponds to (xs[i], ys[j]).
std::string svg_heatmap(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                        const Eigen::MatrixXd& values, const std::string& x_label,
                        const std::string& y_label);

/// Scatter of 2D points colored by value (small rect markers); used when the
/// design is not a rectangular grid.
std::string svg_scatter(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                        const std::string& x_label, const std::string& y_label);

}  // namespace conflictlab
