#include "conflictlab/gaussian_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "conflictlab/errors.hpp"

namespace conflictlab {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

double log_sum_exp(const Eigen::VectorXd& v) {
    const double m = v.maxCoeff();
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

std::vector<int> complement_of(const std::vector<int>& indices, int dim) {
    std::vector<bool> taken(static_cast<std::size_t>(dim), false);
    for (int i : indices) {
        if (i < 0 || i >= dim) throw std::invalid_argument("index out of range");
        if (taken[static_cast<std::size_t>(i)]) throw std::invalid_argument("duplicate index");
        taken[static_cast<std::size_t>(i)] = true;
    }
    std::vector<int> rest;
    for (int i = 0; i < dim; ++i) {
        if (!taken[static_cast<std::size_t>(i)]) rest.push_back(i);
    }
    return rest;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
    return out;
}

Eigen::MatrixXd gather_block(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                             const std::vector<int>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
        }
    }
    return out;
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<double> weights,
                                 std::vector<Eigen::VectorXd> means,
                                 std::vector<Eigen::MatrixXd> covariances)
    : weights_(std::move(weights)), means_(std::move(means)), covariances_(std::move(covariances)) {
    if (weights_.empty() || weights_.size() != means_.size() || weights_.size() != covariances_.size()) {
        throw std::invalid_argument("GaussianMixture: component lists must be nonempty and equally sized");
    }
    dim_ = static_cast<int>(means_[0].size());
    if (dim_ < 1) throw std::invalid_argument("GaussianMixture: dimension must be positive");

    double wsum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("GaussianMixture: weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) {
        throw std::invalid_argument("GaussianMixture: weights must sum to 1 within 1e-12");
    }

    chol_.reserve(weights_.size());
    log_det_.reserve(weights_.size());
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        if (means_[j].size() != dim_) throw std::invalid_argument("GaussianMixture: mean dimension mismatch");
        Eigen::MatrixXd& cov = covariances_[j];
        if (cov.rows() != dim_ || cov.cols() != dim_) {
            throw std::invalid_argument("GaussianMixture: covariance dimension mismatch");
        }
        if (!cov.allFinite() || !means_[j].allFinite()) {
            throw std::invalid_argument("GaussianMixture: parameters must be finite");
        }
        const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-10) throw std::invalid_argument("GaussianMixture: covariance not symmetric within 1e-10");
        cov = ((cov + cov.transpose()) / 2.0).eval();

        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) {
            throw numeric_error("GaussianMixture: covariance not positive definite");
        }
        Eigen::MatrixXd L = llt.matrixL();
        double ld = 0.0;
        for (int i = 0; i < dim_; ++i) ld += std::log(L(i, i));
        chol_.push_back(std::move(L));
        log_det_.push_back(2.0 * ld);
    }
}

Eigen::VectorXd GaussianMixture::mean() const {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
    for (std::size_t j = 0; j < weights_.size(); ++j) m += weights_[j] * means_[j];
    return m;
}

double GaussianMixture::log_density(const Eigen::VectorXd& x) const {
    if (x.size() != dim_) throw std::invalid_argument("log_density: dimension mismatch");
    Eigen::VectorXd terms(components());
    for (int j = 0; j < components(); ++j) {
        const Eigen::VectorXd diff = x - means_[static_cast<std::size_t>(j)];
        const Eigen::VectorXd y =
            chol_[static_cast<std::size_t>(j)].triangularView<Eigen::Lower>().solve(diff);
        const double logphi = -0.5 * (dim_ * kLogTwoPi + log_det_[static_cast<std::size_t>(j)] + y.squaredNorm());
        const double w = weights_[static_cast<std::size_t>(j)];
        terms[j] = w > 0.0 ? std::log(w) + logphi : -std::numeric_limits<double>::infinity();
    }
    return log_sum_exp(terms);
}

Eigen::MatrixXd GaussianMixture::sample(int n, Rng& rng) const {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    std::discrete_distribution<int> pick(weights_.begin(), weights_.end());
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd out(n, dim_);
    Eigen::VectorXd z(dim_);
    for (int i = 0; i < n; ++i) {
        const int j = pick(rng);
        for (int k = 0; k < dim_; ++k) z[k] = gauss(rng);
        out.row(i) = (means_[static_cast<std::size_t>(j)] +
                      chol_[static_cast<std::size_t>(j)].triangularView<Eigen::Lower>() * z)
                         .transpose();
    }
    return out;
}

GaussianMixture GaussianMixture::condition(const std::vector<int>& observed_indices,
                                           const Eigen::VectorXd& observed_values) const {
    MixtureConditioner cond(*this, observed_indices);
    return cond.condition(observed_values);
}

GaussianMixture GaussianMixture::marginal(const std::vector<int>& kept_indices) const {
    if (kept_indices.empty()) throw std::invalid_argument("marginal: kept index set is empty");
    complement_of(kept_indices, dim_);  // validates range and uniqueness
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
    means.reserve(weights_.size());
    covs.reserve(weights_.size());
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        means.push_back(gather(means_[j], kept_indices));
        covs.push_back(gather_block(covariances_[j], kept_indices, kept_indices));
    }
    return GaussianMixture(weights_, std::move(means), std::move(covs));
}

MixtureConditioner::MixtureConditioner(const GaussianMixture& mixture, std::vector<int> observed_indices)
    : observed_(std::move(observed_indices)) {
    const int d = mixture.dimension();
    if (observed_.empty()) throw std::invalid_argument("condition: observed index set is empty");
    free_ = complement_of(observed_, d);
    if (free_.empty()) throw std::invalid_argument("condition: observed index set covers all coordinates");

    components_.reserve(static_cast<std::size_t>(mixture.components()));
    const int dobs = static_cast<int>(observed_.size());
    for (int j = 0; j < mixture.components(); ++j) {
        Component c;
        c.mu_obs = gather(mixture.mean(j), observed_);
        c.mu_free = gather(mixture.mean(j), free_);
        const Eigen::MatrixXd sigma_obs = gather_block(mixture.covariance(j), observed_, observed_);
        const Eigen::MatrixXd sigma_free = gather_block(mixture.covariance(j), free_, free_);
        const Eigen::MatrixXd sigma_fo = gather_block(mixture.covariance(j), free_, observed_);

        Eigen::LLT<Eigen::MatrixXd> llt(sigma_obs);
        if (llt.info() != Eigen::Success) {
            throw numeric_error(
                "condition: observed-block covariance of component " + std::to_string(j) +
                " is singular; refit with a larger ridge");
        }
        c.chol_obs = llt.matrixL();
        c.gain = llt.solve(sigma_fo.transpose()).transpose();
        Eigen::MatrixXd cc = sigma_free - c.gain * sigma_fo.transpose();
        c.cond_cov = ((cc + cc.transpose()) / 2.0).eval();
        double ld = 0.0;
        for (int i = 0; i < dobs; ++i) ld += std::log(c.chol_obs(i, i));
        c.log_norm = -0.5 * dobs * kLogTwoPi - ld;
        const double w = mixture.weights()[static_cast<std::size_t>(j)];
        c.log_weight = w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
        components_.push_back(std::move(c));
    }
}

GaussianMixture MixtureConditioner::condition(const Eigen::VectorXd& observed_values) const {
    if (observed_values.size() != static_cast<Eigen::Index>(observed_.size())) {
        throw std::invalid_argument("condition: observed value size mismatch");
    }
    const std::size_t nj = components_.size();
    Eigen::VectorXd logw(static_cast<Eigen::Index>(nj));
    std::vector<Eigen::VectorXd> means(nj);
    std::vector<Eigen::MatrixXd> covs(nj);
    for (std::size_t j = 0; j < nj; ++j) {
        const Component& c = components_[j];
        const Eigen::VectorXd diff = observed_values - c.mu_obs;
        const Eigen::VectorXd y = c.chol_obs.triangularView<Eigen::Lower>().solve(diff);
        logw[static_cast<Eigen::Index>(j)] = c.log_weight + c.log_norm - 0.5 * y.squaredNorm();
        means[j] = c.mu_free + c.gain * diff;
        covs[j] = c.cond_cov;
    }
    const double lse = log_sum_exp(logw);
    if (!std::isfinite(lse)) {
        throw numeric_error("condition: all component weights vanished at the observed values");
    }
    std::vector<double> weights(nj);
    double sum = 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
        weights[j] = std::exp(logw[static_cast<Eigen::Index>(j)] - lse);
        sum += weights[j];
    }
    for (double& w : weights) w /= sum;
    return GaussianMixture(std::move(weights), std::move(means), std::move(covs));
}

double MixtureConditioner::min_mahalanobis(const Eigen::VectorXd& observed_values) const {
    if (observed_values.size() != static_cast<Eigen::Index>(observed_.size())) {
        throw std::invalid_argument("min_mahalanobis: observed value size mismatch");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const Component& c : components_) {
        const Eigen::VectorXd y =
            c.chol_obs.triangularView<Eigen::Lower>().solve(observed_values - c.mu_obs);
        best = std::min(best, y.norm());
    }
    return best;
}

}  // namespace conflictlab
