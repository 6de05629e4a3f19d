#include "conflictlab/weakinfo.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "conflictlab/divergence.hpp"
#include "conflictlab/errors.hpp"
#include "conflictlab/parallel.hpp"

namespace conflictlab {

void WeakInformativityConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("WeakInformativityConfig: alpha must be in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("WeakInformativityConfig: delta must be in (0,1)");
    if (n_train < 2) throw std::invalid_argument("WeakInformativityConfig: n_train must be >= 2");
    if (replicates < 1) throw std::invalid_argument("WeakInformativityConfig: replicates must be >= 1");
    if (base_draws < 1) throw std::invalid_argument("WeakInformativityConfig: base_draws must be >= 1");
    if (design_size < 1) throw std::invalid_argument("WeakInformativityConfig: design_size must be >= 1");
    if (lhs_iterations < 1) throw std::invalid_argument("WeakInformativityConfig: lhs_iterations must be >= 1");
    fit.validate();
}

namespace {

std::vector<int> index_range(int lo, int hi) {
    std::vector<int> idx(static_cast<std::size_t>(hi - lo));
    std::iota(idx.begin(), idx.end(), lo);
    return idx;
}

std::vector<int> hierarchical_observed_indices(int dg, int dt, int dz) {
    std::vector<int> idx = index_range(0, dg);
    const std::vector<int> zidx = index_range(dg + dt, dg + dt + dz);
    idx.insert(idx.end(), zidx.begin(), zidx.end());
    return idx;
}

Eigen::VectorXd uniform_on(const Rectangle& region, Rng& rng) {
    Eigen::VectorXd g(region.dim());
    for (int i = 0; i < region.dim(); ++i) {
        std::uniform_real_distribution<double> u(region.lower[i], region.upper[i]);
        g[i] = u(rng);
    }
    return g;
}

/// Order statistic ceil(alpha * n) with a guard against the product landing
/// epsilon above an integer.
double lower_alpha_quantile(std::vector<double> values, double alpha) {
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto k = static_cast<std::size_t>(std::ceil(alpha * n - 1e-9));
    k = std::clamp<std::size_t>(k, 1, values.size());
    return values[k - 1];
}

/// Delegates everything to the wrapped model except the base expansion value.
class Gamma0Override final : public SimulatorModel {
public:
    Gamma0Override(const SimulatorModel& inner, Eigen::VectorXd gamma0)
        : inner_(&inner), gamma0_(std::move(gamma0)) {}

    std::string name() const override { return inner_->name(); }
    int theta_dim() const override { return inner_->theta_dim(); }
    int summary_dim() const override { return inner_->summary_dim(); }
    int gamma_dim() const override { return inner_->gamma_dim(); }
    Rectangle gamma_region() const override { return inner_->gamma_region(); }
    Eigen::VectorXd gamma0() const override { return gamma0_; }
    bool prior_is_gaussian() const override { return inner_->prior_is_gaussian(); }
    GaussianMixture analytic_prior(const Eigen::VectorXd& gamma) const override {
        return inner_->analytic_prior(gamma);
    }
    Eigen::VectorXd sample_gamma(Rng& rng) const override { return inner_->sample_gamma(rng); }
    Eigen::VectorXd sample_theta(const Eigen::VectorXd& gamma, Rng& rng) const override {
        return inner_->sample_theta(gamma, rng);
    }
    Eigen::VectorXd simulate_summary(const Eigen::VectorXd& theta, Rng& rng) const override {
        return inner_->simulate_summary(theta, rng);
    }
    std::pair<Eigen::VectorXd, Eigen::VectorXd> draw_joint(const Eigen::VectorXd& gamma,
                                                           Rng& rng) const override {
        return inner_->draw_joint(gamma, rng);
    }

private:
    const SimulatorModel* inner_;
    Eigen::VectorXd gamma0_;
};

/// S summaries from the predictive at the given expansion value, one
/// independent generator stream per draw so that every evaluation sharing
/// `predictive_seed` sees the same underlying randomness.
Eigen::MatrixXd predictive_summaries(const SimulatorModel& model, const Eigen::VectorXd& gamma,
                                     int count, std::uint64_t predictive_seed, int workers) {
    Eigen::MatrixXd z(count, model.summary_dim());
    parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t s) {
        Rng rng = make_rng(predictive_seed, {s});
        z.row(static_cast<Eigen::Index>(s)) = model.draw_joint(gamma, rng).second.transpose();
    });
    return z;
}

std::vector<double> base_p_values_for(const HierarchicalFit& fit, const Eigen::VectorXd& gamma0,
                                      const Eigen::MatrixXd& base_z,
                                      const WeakInformativityConfig& cfg,
                                      std::uint64_t predictive_seed) {
    const auto s_count = static_cast<std::size_t>(base_z.rows());
    std::vector<double> p(s_count);
    if (fit.region().contains(gamma0)) {
        PValueFunction p0(fit, gamma0, cfg.replicates, predictive_seed, cfg.workers);
        for (std::size_t s = 0; s < s_count; ++s) {
            p[s] = p0(base_z.row(static_cast<Eigen::Index>(s)).transpose());
        }
        return p;
    }
    // Baseline outside the expansion family's search region: the hierarchical
    // fit cannot be conditioned there, so the base check runs as a standalone
    // single-prior conflict setup.
    Gamma0Override base_model(fit.model(), gamma0);
    CheckConfig check_cfg;
    check_cfg.n_train = cfg.n_train;
    check_cfg.replicates = cfg.replicates;
    check_cfg.seed = derive_seed(cfg.seed, {tag(SeedPhase::BaseDraws)});
    check_cfg.fit = cfg.fit;
    check_cfg.workers = cfg.workers;
    ConflictCheck check(base_model, check_cfg);
    for (std::size_t s = 0; s < s_count; ++s) {
        p[s] = check.p_value_of_divergence(
            check.divergence_of(base_z.row(static_cast<Eigen::Index>(s)).transpose()));
    }
    return p;
}

}  // namespace

struct HierarchicalFit::Parts {
    const SimulatorModel* model;
    Rectangle region;
    GaussianMixture joint;
    JointFitSummary summary;
};

HierarchicalFit::Parts HierarchicalFit::build_parts(const SimulatorModel& model,
                                                    const WeakInformativityConfig& cfg) {
    cfg.validate();
    const Rectangle region = cfg.gamma_region ? *cfg.gamma_region : model.gamma_region();
    if (region.dim() != model.gamma_dim()) {
        throw std::invalid_argument("fit_hierarchical: gamma region dimension mismatch");
    }
    const int dg = model.gamma_dim();
    const int dt = model.theta_dim();
    const int dz = model.summary_dim();

    Eigen::MatrixXd train(cfg.n_train, dg + dt + dz);
    const bool custom_region = cfg.gamma_region.has_value();
    parallel_for(static_cast<std::size_t>(cfg.n_train), cfg.workers, [&](std::size_t i) {
        Rng rng = make_rng(cfg.seed, {tag(SeedPhase::TrainingDraws), i});
        const Eigen::VectorXd gamma = custom_region ? uniform_on(region, rng) : model.sample_gamma(rng);
        const auto [theta, z] = model.draw_joint(gamma, rng);
        train.row(static_cast<Eigen::Index>(i)).segment(0, dg) = gamma.transpose();
        train.row(static_cast<Eigen::Index>(i)).segment(dg, dt) = theta.transpose();
        train.row(static_cast<Eigen::Index>(i)).segment(dg + dt, dz) = z.transpose();
    });

    FitConfig fit_cfg = cfg.fit;
    if (fit_cfg.workers == 0) fit_cfg.workers = cfg.workers;
    Rng fit_rng = make_rng(cfg.seed, {tag(SeedPhase::JointFit)});
    SelectResult sel = select_bic(train, fit_cfg, fit_rng);
    JointFitSummary summary{sel.mixture().components(), sel.bic, sel.structure};
    return HierarchicalFit::Parts{&model, region, std::move(sel.fit.mixture), summary};
}

HierarchicalFit::HierarchicalFit(Parts&& parts)
    : model_(parts.model),
      region_(parts.region),
      gamma_dim_(parts.model->gamma_dim()),
      theta_dim_(parts.model->theta_dim()),
      summary_dim_(parts.model->summary_dim()),
      joint_(std::move(parts.joint)),
      summary_(parts.summary),
      posterior_conditioner_(joint_, hierarchical_observed_indices(gamma_dim_, theta_dim_, summary_dim_)),
      gamma_conditioner_(joint_, index_range(0, gamma_dim_)) {}

HierarchicalFit::HierarchicalFit(const SimulatorModel& model, const WeakInformativityConfig& cfg)
    : HierarchicalFit(build_parts(model, cfg)) {}

HierarchicalFit fit_hierarchical(const SimulatorModel& model, const WeakInformativityConfig& cfg) {
    return HierarchicalFit(model, cfg);
}

GaussianMixture HierarchicalFit::prior_given(const Eigen::VectorXd& gamma) const {
    if (gamma.size() != gamma_dim_) throw std::invalid_argument("prior_given: gamma dimension mismatch");
    if (model_->prior_is_gaussian()) return model_->analytic_prior(gamma);
    return gamma_conditioner_.condition(gamma).marginal(index_range(0, theta_dim_));
}

GaussianMixture HierarchicalFit::posterior_given(const Eigen::VectorXd& gamma,
                                                 const Eigen::VectorXd& z) const {
    if (gamma.size() != gamma_dim_ || z.size() != summary_dim_) {
        throw std::invalid_argument("posterior_given: dimension mismatch");
    }
    Eigen::VectorXd values(gamma_dim_ + summary_dim_);
    values.head(gamma_dim_) = gamma;
    values.tail(summary_dim_) = z;
    return posterior_conditioner_.condition(values);
}

PValueFunction::PValueFunction(const HierarchicalFit& fit, Eigen::VectorXd gamma, int replicates,
                               std::uint64_t predictive_seed, int workers)
    : fit_(&fit), gamma_(std::move(gamma)), prior_(fit.prior_given(gamma_)) {
    if (replicates < 1) throw std::invalid_argument("p_value_function: replicates must be >= 1");
    if (!fit.region().contains(gamma_)) {
        std::cerr << "conflictlab: warning: gamma outside the pseudo-prior region; "
                     "the conditional fit extrapolates\n";
    }
    const auto r_count = static_cast<std::size_t>(replicates);
    const Eigen::MatrixXd z =
        predictive_summaries(fit.model(), gamma_, replicates, predictive_seed, workers);
    sorted_.resize(r_count);
    parallel_for(r_count, workers, [&](std::size_t r) {
        try {
            const GaussianMixture posterior =
                fit.posterior_given(gamma_, z.row(static_cast<Eigen::Index>(r)).transpose());
            sorted_[r] = divergence_statistic(posterior, prior_);
        } catch (const numeric_error& e) {
            throw numeric_error("replicate " + std::to_string(r) + ": " + e.what());
        }
    });
    std::sort(sorted_.begin(), sorted_.end());
}

double PValueFunction::divergence_of(const Eigen::VectorXd& z) const {
    return divergence_statistic(fit_->posterior_given(gamma_, z), prior_);
}

double PValueFunction::p_of_divergence(double g) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), g);
    return static_cast<double>(std::distance(it, sorted_.end())) / static_cast<double>(sorted_.size());
}

PValueFunction p_value_function(const HierarchicalFit& fit, const Eigen::VectorXd& gamma,
                                int replicates, std::uint64_t predictive_seed, int workers) {
    return PValueFunction(fit, gamma, replicates, predictive_seed, workers);
}

WeakInfoSession::WeakInfoSession(const SimulatorModel& model, const WeakInformativityConfig& cfg)
    : cfg_(cfg),
      fit_(model, cfg),
      gamma0_(cfg.gamma0 ? *cfg.gamma0 : model.gamma0()),
      predictive_seed_(derive_seed(cfg.seed, {tag(SeedPhase::Predictive)})) {
    if (gamma0_.size() != model.gamma_dim()) {
        throw std::invalid_argument("WeakInfoSession: gamma0 dimension mismatch");
    }
    base_z_ = predictive_summaries(model, gamma0_, cfg_.base_draws, predictive_seed_, cfg_.workers);
    base_p_ = base_p_values_for(fit_, gamma0_, base_z_, cfg_, predictive_seed_);
    x_alpha_ = lower_alpha_quantile(base_p_, cfg_.alpha);
    if (!(x_alpha_ > 0.0)) {
        throw numeric_error(
            "WeakInfoSession: x_alpha is zero (all base p-values tie at the smallest value); "
            "increase replicates");
    }
}

WeakInfoSession::GammaEvaluation WeakInfoSession::evaluate(const Eigen::VectorXd& gamma,
                                                           int inner_workers) const {
    PValueFunction pg(fit_, gamma, cfg_.replicates, predictive_seed_, inner_workers);
    GammaEvaluation out;
    out.gamma = gamma;
    out.p_values.resize(static_cast<std::size_t>(base_z_.rows()));
    std::size_t count = 0;
    for (Eigen::Index s = 0; s < base_z_.rows(); ++s) {
        const double p = pg(base_z_.row(s).transpose());
        out.p_values[static_cast<std::size_t>(s)] = p;
        if (p <= x_alpha_) ++count;
    }
    const double s_count = static_cast<double>(base_z_.rows());
    const double prop = static_cast<double>(count) / s_count;
    out.w_alpha = 1.0 - prop / x_alpha_;
    out.std_error = std::sqrt(std::max(prop * (1.0 - prop), 1.0 / s_count) / s_count) / x_alpha_;
    return out;
}

WeakInformativityReport WeakInfoSession::search(const Eigen::MatrixXd& gamma_points) const {
    if (gamma_points.cols() != fit_.region().dim()) {
        throw std::invalid_argument("search: gamma points dimension mismatch");
    }
    const auto n = static_cast<std::size_t>(gamma_points.rows());
    std::vector<GammaEvaluation> evals(n);
    parallel_for(n, cfg_.workers, [&](std::size_t i) {
        evals[i] = evaluate(gamma_points.row(static_cast<Eigen::Index>(i)).transpose(), 1);
    });

    WeakInformativityReport report;
    report.gamma_points = gamma_points;
    report.x_alpha = x_alpha_;
    report.delta = cfg_.delta;
    report.w_alpha.reserve(n);
    report.w_alpha_se.reserve(n);
    std::size_t best = 0;
    std::vector<Eigen::Index> satisfying;
    for (std::size_t i = 0; i < n; ++i) {
        report.w_alpha.push_back(evals[i].w_alpha);
        report.w_alpha_se.push_back(evals[i].std_error);
        if (evals[i].w_alpha > evals[best].w_alpha) best = i;
        if (evals[i].w_alpha > cfg_.delta) satisfying.push_back(static_cast<Eigen::Index>(i));
    }
    report.best_gamma = gamma_points.row(static_cast<Eigen::Index>(best)).transpose();
    report.satisfying_points.resize(static_cast<Eigen::Index>(satisfying.size()), gamma_points.cols());
    for (std::size_t i = 0; i < satisfying.size(); ++i) {
        report.satisfying_points.row(static_cast<Eigen::Index>(i)) = gamma_points.row(satisfying[i]);
    }
    return report;
}

WeakInformativityReport WeakInfoSession::search() const {
    Rng rng = make_rng(cfg_.seed, {tag(SeedPhase::LhsDesign)});
    const LhsDesign design = lhs_maximin(fit_.region(), cfg_.design_size, cfg_.lhs_iterations, rng);
    WeakInformativityReport report = search(design.points);
    report.lhs_criterion = design.criterion_value;
    return report;
}

double degree_of_weak_informativity(const HierarchicalFit& fit, const Eigen::VectorXd& gamma,
                                    const Eigen::VectorXd& gamma0,
                                    const WeakInformativityConfig& cfg) {
    cfg.validate();
    const std::uint64_t predictive_seed = derive_seed(cfg.seed, {tag(SeedPhase::Predictive)});
    const Eigen::MatrixXd base_z =
        predictive_summaries(fit.model(), gamma0, cfg.base_draws, predictive_seed, cfg.workers);
    const std::vector<double> base_p = base_p_values_for(fit, gamma0, base_z, cfg, predictive_seed);
    const double x_alpha = lower_alpha_quantile(base_p, cfg.alpha);
    if (!(x_alpha > 0.0)) {
        throw numeric_error(
            "degree_of_weak_informativity: x_alpha is zero; increase replicates");
    }
    PValueFunction pg(fit, gamma, cfg.replicates, predictive_seed, cfg.workers);
    std::size_t count = 0;
    for (Eigen::Index s = 0; s < base_z.rows(); ++s) {
        if (pg(base_z.row(s).transpose()) <= x_alpha) ++count;
    }
    const double prop = static_cast<double>(count) / static_cast<double>(base_z.rows());
    return 1.0 - prop / x_alpha;
}

}  // namespace conflictlab
