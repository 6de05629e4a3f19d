#include "conflictlab/models/boom_bust.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conflictlab/errors.hpp"
#include "conflictlab/summary_stats.hpp"

namespace conflictlab::models {

void BoomBustParams::validate() const {
    if (!(growth >= 0.0) || !std::isfinite(growth)) {
        throw std::invalid_argument("BoomBustParams: growth r must be >= 0");
    }
    if (!std::isfinite(threshold)) throw std::invalid_argument("BoomBustParams: threshold must be finite");
    if (!(survival >= 0.0 && survival <= 1.0)) {
        throw std::invalid_argument("BoomBustParams: survival alpha must be in [0,1]");
    }
    if (!(recruitment >= 0.0) || !std::isfinite(recruitment)) {
        throw std::invalid_argument("BoomBustParams: recruitment beta must be >= 0");
    }
}

namespace {

long long poisson_draw(double mean, Rng& rng) {
    if (mean <= 0.0) return 0;
    if (mean > 1e9) throw simulation_failure("boombust: divergent Poisson mean");
    std::poisson_distribution<long long> pois(mean);
    return pois(rng);
}

}  // namespace

Eigen::VectorXd boombust_series(const BoomBustParams& params, int length, int burnin, Rng& rng) {
    params.validate();
    if (length < 1 || burnin < 0) throw std::invalid_argument("boombust_series: invalid length");
    long long n = static_cast<long long>(std::floor(params.threshold));
    if (n < 0) n = 0;
    Eigen::VectorXd out(length);
    for (int t = 0; t < burnin + length; ++t) {
        long long next;
        if (static_cast<double>(n) <= params.threshold) {
            next = poisson_draw(static_cast<double>(n) * (1.0 + params.growth), rng);
        } else {
            std::binomial_distribution<long long> binom(n, params.survival);
            next = binom(rng);
        }
        next += poisson_draw(params.recruitment, rng);
        n = next;
        if (t >= burnin) out[t - burnin] = static_cast<double>(n);
    }
    return out;
}

Eigen::VectorXd boombust_summaries(const Eigen::VectorXd& series) {
    const Eigen::Index t = series.size();
    if (t < 5) throw std::invalid_argument("boombust_summaries: series too short");

    const Eigen::VectorXd diffs = series.tail(t - 1) - series.head(t - 1);

    std::vector<double> ratio_values;
    ratio_values.reserve(static_cast<std::size_t>(t - 1));
    for (Eigen::Index i = 1; i < t; ++i) {
        if (series[i - 1] != 0.0) ratio_values.push_back(series[i] / series[i - 1]);
    }
    if (ratio_values.size() < 4) {
        throw simulation_failure("boombust_summaries: too few nonzero denominators for ratios");
    }
    const Eigen::VectorXd ratios =
        Eigen::Map<const Eigen::VectorXd>(ratio_values.data(), static_cast<Eigen::Index>(ratio_values.size()));

    Eigen::VectorXd out(12);
    out.segment<4>(0) = moment_summaries(series);
    out.segment<4>(4) = moment_summaries(diffs);
    out.segment<4>(8) = moment_summaries(ratios);
    return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> boombust_simulate(const BoomBustParams& params,
                                                              Rng& rng) {
    Eigen::VectorXd series = boombust_series(params, 250, 50, rng);
    Eigen::VectorXd summary = boombust_summaries(series);
    return {std::move(series), std::move(summary)};
}

double sample_beta(double a, double b, Rng& rng) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    for (;;) {
        const double x = ga(rng);
        const double y = gb(rng);
        if (x + y > 0.0) return x / (x + y);
    }
}

Eigen::VectorXd BoomBust::sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const {
    if (gamma.size() != 1) throw std::invalid_argument("boombust: gamma must be scalar");
    if (!(gamma[0] > 0.0)) throw std::invalid_argument("boombust: gamma must be > 0");
    return Eigen::VectorXd::Constant(1, sample_beta(gamma[0], gamma[0], rng));
}

BoomBustParams BoomBust::sample_nuisance(double r, Rng& rng) const {
    std::uniform_real_distribution<double> ukappa(10.0, 80.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    BoomBustParams p;
    p.growth = r;
    p.threshold = ukappa(rng);
    p.survival = u01(rng);
    p.recruitment = u01(rng);
    return p;
}

Eigen::VectorXd BoomBust::simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const {
    if (theta.size() != 1) throw std::invalid_argument("boombust: theta is the scalar growth rate r");
    const BoomBustParams params = sample_nuisance(theta[0], rng);
    return boombust_simulate(params, rng).second;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> BoomBust::simulate_full(const Eigen::VectorXd& gamma,
                                                                    Rng& rng) const {
    const Eigen::VectorXd r = sample_theta(gamma, rng);
    const BoomBustParams params = sample_nuisance(r[0], rng);
    Eigen::VectorXd theta(4);
    theta << params.growth, params.threshold, params.survival, params.recruitment;
    return {std::move(theta), boombust_simulate(params, rng).second};
}

}  // namespace conflictlab::models
