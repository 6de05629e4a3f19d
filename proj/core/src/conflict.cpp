#include "conflictlab/conflict.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "conflictlab/divergence.hpp"
#include "conflictlab/errors.hpp"
#include "conflictlab/parallel.hpp"

namespace conflictlab {

void CheckConfig::validate() const {
    if (n_train < 2) throw std::invalid_argument("CheckConfig: n_train must be >= 2");
    if (replicates < 1) throw std::invalid_argument("CheckConfig: replicates must be >= 1");
    fit.validate();
    if (n_train < 10 * replicates) {
        std::cerr << "conflictlab: warning: n_train = " << n_train << " is below 10 x replicates = "
                  << 10 * replicates << "; the joint fit may be rough\n";
    }
    if (replicates < 100) {
        std::cerr << "conflictlab: warning: replicates = " << replicates
                  << " gives p-value resolution coarser than 0.01\n";
    }
}

double divergence_statistic(const GaussianMixture& posterior, const GaussianMixture& prior) {
    return kl_mixture_variational(posterior, prior);
}

namespace {

std::vector<int> index_range(int lo, int hi) {
    std::vector<int> idx(static_cast<std::size_t>(hi - lo));
    std::iota(idx.begin(), idx.end(), lo);
    return idx;
}

Eigen::MatrixXd simulate_training(const SimulatorModel& model, const CheckConfig& cfg) {
    const int dt = model.theta_dim();
    const int dz = model.summary_dim();
    const Eigen::VectorXd gamma0 = model.gamma0();
    Eigen::MatrixXd train(cfg.n_train, dt + dz);
    parallel_for(static_cast<std::size_t>(cfg.n_train), cfg.workers, [&](std::size_t i) {
        Rng rng = make_rng(cfg.seed, {tag(SeedPhase::TrainingDraws), i});
        const auto [theta, z] = model.draw_joint(gamma0, rng);
        train.row(static_cast<Eigen::Index>(i)).head(dt) = theta.transpose();
        train.row(static_cast<Eigen::Index>(i)).tail(dz) = z.transpose();
    });
    return train;
}

Eigen::MatrixXd simulate_replicates(const SimulatorModel& model, const CheckConfig& cfg) {
    const Eigen::VectorXd gamma0 = model.gamma0();
    Eigen::MatrixXd z(cfg.replicates, model.summary_dim());
    parallel_for(static_cast<std::size_t>(cfg.replicates), cfg.workers, [&](std::size_t r) {
        Rng rng = make_rng(cfg.seed, {tag(SeedPhase::Replicates), r});
        z.row(static_cast<Eigen::Index>(r)) = model.draw_joint(gamma0, rng).second.transpose();
    });
    return z;
}

std::optional<GaussianMixture> exact_prior(const SimulatorModel& model) {
    if (!model.prior_is_gaussian()) return std::nullopt;
    return model.analytic_prior(model.gamma0());
}

}  // namespace

struct ConflictCheck::Parts {
    int theta_dim;
    int summary_dim;
    GaussianMixture joint;
    GaussianMixture prior;
    JointFitSummary summary;
    const Eigen::MatrixXd* replicate_summaries;
    int workers;
};

ConflictCheck::Parts ConflictCheck::build_parts(const Eigen::MatrixXd& train, int theta_dim,
                                                const Eigen::MatrixXd& replicate_summaries,
                                                std::optional<GaussianMixture> prior,
                                                const CheckConfig& cfg) {
    cfg.validate();
    if (theta_dim < 1 || theta_dim >= train.cols()) {
        throw std::invalid_argument("ConflictCheck: theta_dim must split the training columns");
    }
    const int dz = static_cast<int>(train.cols()) - theta_dim;
    if (replicate_summaries.cols() != dz) {
        throw std::invalid_argument("ConflictCheck: replicate summary dimension mismatch");
    }
    if (!replicate_summaries.allFinite()) {
        throw std::invalid_argument("ConflictCheck: replicate summaries contain non-finite values");
    }

    FitConfig fit_cfg = cfg.fit;
    if (fit_cfg.workers == 0) fit_cfg.workers = cfg.workers;
    Rng fit_rng = make_rng(cfg.seed, {tag(SeedPhase::JointFit)});
    SelectResult joint = select_bic(train, fit_cfg, fit_rng);
    JointFitSummary summary{joint.mixture().components(), joint.bic, joint.structure};

    if (!prior) {
        Rng prior_rng = make_rng(cfg.seed, {tag(SeedPhase::PriorFit)});
        prior = select_bic(train.leftCols(theta_dim), fit_cfg, prior_rng).fit.mixture;
    }
    if (prior->dimension() != theta_dim) {
        throw std::invalid_argument("ConflictCheck: prior dimension does not match theta");
    }

    return Parts{theta_dim,          dz,      std::move(joint.fit.mixture), std::move(*prior),
                 summary, &replicate_summaries, cfg.workers};
}

ConflictCheck::ConflictCheck(Parts&& parts)
    : theta_dim_(parts.theta_dim),
      summary_dim_(parts.summary_dim),
      joint_(std::move(parts.joint)),
      prior_(std::move(parts.prior)),
      conditioner_(joint_, index_range(theta_dim_, theta_dim_ + summary_dim_)),
      summary_(parts.summary) {
    const Eigen::MatrixXd& z = *parts.replicate_summaries;
    replicates_.resize(static_cast<std::size_t>(z.rows()));
    parallel_for(replicates_.size(), parts.workers, [&](std::size_t r) {
        try {
            const GaussianMixture posterior =
                conditioner_.condition(z.row(static_cast<Eigen::Index>(r)).transpose());
            replicates_[r] = divergence_statistic(posterior, prior_);
        } catch (const numeric_error& e) {
            throw numeric_error("replicate " + std::to_string(r) + ": " + e.what());
        }
    });
    std::sort(replicates_.begin(), replicates_.end());
}

ConflictCheck::ConflictCheck(const Eigen::MatrixXd& train, int theta_dim,
                             const Eigen::MatrixXd& replicate_summaries,
                             std::optional<GaussianMixture> prior, const CheckConfig& cfg)
    : ConflictCheck(build_parts(train, theta_dim, replicate_summaries, std::move(prior), cfg)) {}

ConflictCheck::ConflictCheck(const SimulatorModel& model, const CheckConfig& cfg)
    : ConflictCheck(simulate_training(model, cfg), model.theta_dim(),
                    simulate_replicates(model, cfg), exact_prior(model), cfg) {}

double ConflictCheck::divergence_of(const Eigen::VectorXd& z_obs) const {
    if (z_obs.size() != summary_dim_) {
        throw std::invalid_argument("ConflictCheck: observed summary dimension mismatch");
    }
    return divergence_statistic(conditioner_.condition(z_obs), prior_);
}

double ConflictCheck::p_value_of_divergence(double g) const {
    const auto it = std::lower_bound(replicates_.begin(), replicates_.end(), g);
    const auto count = static_cast<double>(std::distance(it, replicates_.end()));
    return count / static_cast<double>(replicates_.size());
}

ConflictCheckResult ConflictCheck::evaluate(const Eigen::VectorXd& z_obs) const {
    ConflictCheckResult out;
    out.g_obs = divergence_of(z_obs);
    out.g_replicates = replicates_;
    out.p_value = p_value_of_divergence(out.g_obs);
    out.joint_fit_summary = summary_;
    out.z_obs_mahalanobis = conditioner_.min_mahalanobis(z_obs);
    return out;
}

ConflictCheckResult run_check(const SimulatorModel& model, const Eigen::VectorXd& z_obs,
                              const CheckConfig& cfg) {
    if (z_obs.size() != model.summary_dim()) {
        throw std::invalid_argument("run_check: observed summary dimension mismatch");
    }
    ConflictCheck check(model, cfg);
    return check.evaluate(z_obs);
}

}  // namespace conflictlab
