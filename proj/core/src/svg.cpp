#include "conflictlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace conflictlab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 560.0;
constexpr double kTop = 24.0;
constexpr double kBottom = 430.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Compact viridis-like ramp, linearly interpolated.
std::string color_of(double t) {
    static const int anchors[6][3] = {{68, 1, 84},   {59, 82, 139},  {33, 145, 140},
                                      {94, 201, 98}, {253, 231, 37}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int lo = std::min(4, static_cast<int>(t));
    const double f = t - lo;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(anchors[lo][0] + f * (anchors[lo + 1][0] - anchors[lo][0]))),
                  static_cast<int>(std::lround(anchors[lo][1] + f * (anchors[lo + 1][1] - anchors[lo][1]))),
                  static_cast<int>(std::lround(anchors[lo][2] + f * (anchors[lo + 1][2] - anchors[lo][2]))));
    return buf;
}

std::string text(double x, double y, const std::string& s, const std::string& anchor = "middle") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"" +
           anchor + "\">" + s + "</text>\n";
}

std::string header() {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n"
           "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" fill=\"white\"/>\n";
}

std::string axes(double xmin, double xmax, double ymin, double ymax, const std::string& x_label,
                 const std::string& y_label) {
    std::string s;
    s += "<path d=\"M " + num(kLeft) + " " + num(kTop) + " L " + num(kLeft) + " " + num(kBottom) +
         " L " + num(kRight) + " " + num(kBottom) + "\" stroke=\"black\" fill=\"none\"/>\n";
    s += text((kLeft + kRight) / 2, kHeight - 12, x_label);
    s += text(16, (kTop + kBottom) / 2, y_label, "middle");
    s += text(kLeft, kBottom + 18, num(xmin));
    s += text(kRight, kBottom + 18, num(xmax));
    s += text(kLeft - 8, kBottom, num(ymin), "end");
    s += text(kLeft - 8, kTop + 6, num(ymax), "end");
    return s;
}

std::string colorbar(double vmin, double vmax) {
    std::string s;
    const double x = kRight + 24.0;
    const int steps = 64;
    for (int i = 0; i < steps; ++i) {
        const double t0 = static_cast<double>(i) / steps;
        const double y1 = kBottom - (kBottom - kTop) * static_cast<double>(i + 1) / steps;
        s += "<rect x=\"" + num(x) + "\" y=\"" + num(y1) + "\" width=\"16\" height=\"" +
             num((kBottom - kTop) / steps + 0.5) + "\" fill=\"" + color_of(t0) + "\"/>\n";
    }
    s += text(x + 24, kBottom, num(vmin), "start");
    s += text(x + 24, kTop + 6, num(vmax), "start");
    s += text(x + 8, kTop - 8, "W_alpha");
    return s;
}

struct Range {
    double lo, hi;
    double scale(double v, double a, double b) const {
        const double span = hi > lo ? hi - lo : 1.0;
        return a + (v - lo) / span * (b - a);
    }
};

}  // namespace

std::string svg_line_plot(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const std::string& x_label) {
    if (x.size() != y.size() || x.size() < 1) throw std::invalid_argument("svg_line_plot: bad input");
    std::vector<int> order(static_cast<std::size_t>(x.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });

    const Range xr{x.minCoeff(), x.maxCoeff()};
    const Range yr{std::min(0.0, y.minCoeff()), std::max(y.maxCoeff(), 1e-12)};
    std::string s = header();
    s += axes(xr.lo, xr.hi, yr.lo, yr.hi, x_label, "W_alpha");
    std::string d;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double px = xr.scale(x[order[i]], kLeft, kRight);
        const double py = yr.scale(y[order[i]], kBottom, kTop);
        d += (i == 0 ? "M " : "L ") + num(px) + " " + num(py) + " ";
    }
    s += "<path d=\"" + d + "\" stroke=\"#21918c\" stroke-width=\"2\" fill=\"none\"/>\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double px = xr.scale(x[order[i]], kLeft, kRight);
        const double py = yr.scale(y[order[i]], kBottom, kTop);
        s += "<rect x=\"" + num(px - 2.5) + "\" y=\"" + num(py - 2.5) +
             "\" width=\"5\" height=\"5\" fill=\"#440154\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string svg_heatmap(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                        const Eigen::MatrixXd& values, const std::string& x_label,
                        const std::string& y_label) {
    if (values.rows() != xs.size() || values.cols() != ys.size()) {
        throw std::invalid_argument("svg_heatmap: value grid does not match axes");
    }
    const double vmin = values.minCoeff();
    const double vmax = values.maxCoeff();
    const double span = vmax > vmin ? vmax - vmin : 1.0;
    const Range xr{xs.minCoeff(), xs.maxCoeff()};
    const Range yr{ys.minCoeff(), ys.maxCoeff()};

    std::string s = header();
    const double cw = (kRight - kLeft) / static_cast<double>(xs.size());
    const double ch = (kBottom - kTop) / static_cast<double>(ys.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
        for (Eigen::Index j = 0; j < ys.size(); ++j) {
            const double t = (values(i, j) - vmin) / span;
            const double px = kLeft + cw * static_cast<double>(i);
            const double py = kBottom - ch * static_cast<double>(j + 1);
            s += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(cw + 0.5) +
                 "\" height=\"" + num(ch + 0.5) + "\" fill=\"" + color_of(t) + "\"/>\n";
        }
    }
    s += axes(xr.lo, xr.hi, yr.lo, yr.hi, x_label, y_label);
    s += colorbar(vmin, vmax);
    s += "</svg>\n";
    return s;
}

std::string svg_scatter(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                        const std::string& x_label, const std::string& y_label) {
    if (points.rows() != values.size() || points.cols() != 2) {
        throw std::invalid_argument("svg_scatter: expected n x 2 points");
    }
    const double vmin = values.minCoeff();
    const double vmax = values.maxCoeff();
    const double span = vmax > vmin ? vmax - vmin : 1.0;
    const Range xr{points.col(0).minCoeff(), points.col(0).maxCoeff()};
    const Range yr{points.col(1).minCoeff(), points.col(1).maxCoeff()};

    std::string s = header();
    s += axes(xr.lo, xr.hi, yr.lo, yr.hi, x_label, y_label);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const double px = xr.scale(points(i, 0), kLeft, kRight);
        const double py = yr.scale(points(i, 1), kBottom, kTop);
        const double t = (values[i] - vmin) / span;
        s += "<rect x=\"" + num(px - 4) + "\" y=\"" + num(py - 4) +
             "\" width=\"8\" height=\"8\" fill=\"" + color_of(t) + "\"/>\n";
    }
    s += colorbar(vmin, vmax);
    s += "</svg>\n";
    return s;
}

}  // namespace conflictlab
