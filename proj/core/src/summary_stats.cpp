#include "conflictlab/summary_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "conflictlab/errors.hpp"

namespace conflictlab {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// AS 241 algorithm PPND16 (Wichura, 1988).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

double sample_quantile(Eigen::VectorXd values, double p) {
    const Eigen::Index n = values.size();
    if (n < 1) throw std::invalid_argument("sample_quantile: empty data");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_quantile: p must be in [0,1]");
    std::sort(values.data(), values.data() + n);
    const double h = (static_cast<double>(n) - 1.0) * p;
    const auto lo = static_cast<Eigen::Index>(std::floor(h));
    if (lo >= n - 1) return values[n - 1];
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

Eigen::Vector4d octile_summaries(const Eigen::VectorXd& column) {
    const Eigen::Index n = column.size();
    if (n < 8) throw std::invalid_argument("octile_summaries: need at least 8 observations");
    Eigen::VectorXd sorted = column;
    std::sort(sorted.data(), sorted.data() + n);
    double e[8];
    for (int j = 1; j <= 7; ++j) {
        const double h = (static_cast<double>(n) - 1.0) * (static_cast<double>(j) / 8.0);
        const auto lo = static_cast<Eigen::Index>(std::floor(h));
        e[j] = lo >= n - 1 ? sorted[n - 1]
                           : sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
    }
    const double range = e[6] - e[2];
    if (!(range > 0.0)) {
        throw simulation_failure("octile_summaries: octile range E6 - E2 is zero");
    }
    Eigen::Vector4d out;
    out << e[4], range, (e[6] + e[2] - 2.0 * e[4]) / range, (e[7] - e[5] + e[3] - e[1]) / range;
    return out;
}

Eigen::Vector4d moment_summaries(const Eigen::VectorXd& series) {
    const Eigen::Index n = series.size();
    if (n < 4) throw simulation_failure("moment_summaries: need at least 4 observations");
    const double mean = series.mean();
    const Eigen::ArrayXd centered = series.array() - mean;
    const double m2 = centered.square().mean();
    if (!(m2 > 0.0)) throw simulation_failure("moment_summaries: zero variance");
    const double m3 = centered.cube().mean();
    const double m4 = centered.square().square().mean();
    Eigen::Vector4d out;
    out << mean, centered.square().sum() / (static_cast<double>(n) - 1.0), m3 / std::pow(m2, 1.5),
        m4 / (m2 * m2);
    return out;
}

namespace {

std::vector<double> fractional_ranks(const Eigen::VectorXd& v) {
    const auto n = static_cast<std::size_t>(v.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: size mismatch");
    if (a.size() < 3) throw std::invalid_argument("spearman: need at least 3 observations");
    const std::vector<double> ra = fractional_ranks(a);
    const std::vector<double> rb = fractional_ranks(b);
    const auto n = static_cast<std::size_t>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) {
        throw simulation_failure("spearman: constant column");
    }
    return sab / std::sqrt(saa * sbb);
}

Eigen::Vector3d rank_correlations(const Eigen::MatrixXd& data) {
    if (data.cols() != 3) throw std::invalid_argument("rank_correlations: expected 3 columns");
    Eigen::Vector3d out;
    out << spearman(data.col(0), data.col(1)), spearman(data.col(0), data.col(2)),
        spearman(data.col(1), data.col(2));
    return out;
}

}  // namespace conflictlab
