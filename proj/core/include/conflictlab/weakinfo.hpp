#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "conflictlab/conflict.hpp"
#include "conflictlab/gaussian_mixture.hpp"
#include "conflictlab/lhs.hpp"
#include "conflictlab/mixture_fit.hpp"
#include "conflictlab/rectangle.hpp"
#include "conflictlab/simulator_model.hpp"

namespace conflictlab {

struct WeakInformativityConfig {
    double alpha = 0.05;
    double delta = 0.5;
    /// (gamma, theta, z) draws for the hierarchical mixture fit.
    int n_train = 100000;
    /// Replicates R behind each inner tail probability.
    int replicates = 1000;
    /// Base-prior-predictive draws S for the outer distribution.
    int base_draws = 500;
    /// Overrides of the model's search region and base expansion value.
    std::optional<Rectangle> gamma_region;
    std::optional<Eigen::VectorXd> gamma0;
    int design_size = 100;
    int lhs_iterations = 1000;
    std::uint64_t seed = 0;
    FitConfig fit;
    int workers = 0;

    void validate() const;
};

struct WeakInformativityReport {
    Eigen::MatrixXd gamma_points;       // design points, one per row
    std::vector<double> w_alpha;        // W_alpha(gamma) per design point
    std::vector<double> w_alpha_se;     // binomial standard errors
    double x_alpha = 0.0;               // alpha-quantile of the base p-values
    Eigen::VectorXd best_gamma;
    Eigen::MatrixXd satisfying_points;  // rows with w_alpha > delta
    double delta = 0.0;
    std::optional<double> lhs_criterion;
};

/// Mixture fit to hierarchical draws (gamma_i, theta_i, z_i) from
/// p(gamma) p(theta|gamma) p(z|theta) with the uniform pseudo-prior on the
/// search region, plus the induced prior and posterior accessors.
class HierarchicalFit {
public:
    HierarchicalFit(const SimulatorModel& model, const WeakInformativityConfig& cfg);

    const GaussianMixture& joint() const { return joint_; }
    const JointFitSummary& fit_summary() const { return summary_; }
    const SimulatorModel& model() const { return *model_; }
    const Rectangle& region() const { return region_; }

    /// p~(theta|gamma): exact when the model declares its prior Gaussian,
    /// otherwise by conditioning the fit on gamma and marginalizing z.
    GaussianMixture prior_given(const Eigen::VectorXd& gamma) const;

    /// p~(theta|z, gamma) by conditioning the fit on (gamma, z).
    GaussianMixture posterior_given(const Eigen::VectorXd& gamma, const Eigen::VectorXd& z) const;

private:
    struct Parts;
    static Parts build_parts(const SimulatorModel& model, const WeakInformativityConfig& cfg);
    explicit HierarchicalFit(Parts&& parts);

    const SimulatorModel* model_;
    Rectangle region_;
    int gamma_dim_, theta_dim_, summary_dim_;
    GaussianMixture joint_;
    JointFitSummary summary_;
    MixtureConditioner posterior_conditioner_;  // observed = (gamma, z)
    MixtureConditioner gamma_conditioner_;      // observed = gamma
};

HierarchicalFit fit_hierarchical(const SimulatorModel& model, const WeakInformativityConfig& cfg);

/// Empirical tail-probability function P^_gamma(z) built from `replicates`
/// summaries of the gamma-predictive: the proportion of replicate
/// divergences G~(z^(r), gamma) at least as large as G~(z, gamma).
class PValueFunction {
public:
    PValueFunction(const HierarchicalFit& fit, Eigen::VectorXd gamma, int replicates,
                   std::uint64_t predictive_seed, int workers);

    double operator()(const Eigen::VectorXd& z) const { return p_of_divergence(divergence_of(z)); }
    double divergence_of(const Eigen::VectorXd& z) const;
    double p_of_divergence(double g) const;

    const std::vector<double>& replicate_divergences() const { return sorted_; }
    const GaussianMixture& prior() const { return prior_; }

private:
    const HierarchicalFit* fit_;
    Eigen::VectorXd gamma_;
    GaussianMixture prior_;
    std::vector<double> sorted_;
};

PValueFunction p_value_function(const HierarchicalFit& fit, const Eigen::VectorXd& gamma,
                                int replicates, std::uint64_t predictive_seed, int workers = 0);

/// Shared state of one weak-informativity study: the hierarchical fit, the S
/// base-prior-predictive summaries, the base p-values and their
/// alpha-quantile x_alpha. Every gamma evaluation reuses the same base draws
/// and the same predictive random-number stream, so W_alpha(gamma0) is pinned
/// near zero by construction and surface comparisons share randomness.
class WeakInfoSession {
public:
    WeakInfoSession(const SimulatorModel& model, const WeakInformativityConfig& cfg);

    struct GammaEvaluation {
        Eigen::VectorXd gamma;
        double w_alpha = 0.0;
        double std_error = 0.0;
        std::vector<double> p_values;  // P^_gamma(z'_s) per base draw
    };

    GammaEvaluation evaluate(const Eigen::VectorXd& gamma, int inner_workers = 1) const;

    WeakInformativityReport search(const Eigen::MatrixXd& gamma_points) const;
    /// Search over a fresh maximin LHS design of cfg.design_size points.
    WeakInformativityReport search() const;

    const HierarchicalFit& fit() const { return fit_; }
    double x_alpha() const { return x_alpha_; }
    const std::vector<double>& base_p_values() const { return base_p_; }
    const Eigen::MatrixXd& base_summaries() const { return base_z_; }
    const Eigen::VectorXd& gamma0() const { return gamma0_; }

private:
    WeakInformativityConfig cfg_;
    HierarchicalFit fit_;
    Eigen::VectorXd gamma0_;
    std::uint64_t predictive_seed_;
    Eigen::MatrixXd base_z_;
    std::vector<double> base_p_;
    double x_alpha_;
};

/// W_alpha(gamma) = 1 - P(P^_gamma(z') <= x_alpha) / x_alpha for a single
/// gamma, sharing no state; prefer WeakInfoSession for sweeps.
double degree_of_weak_informativity(const HierarchicalFit& fit, const Eigen::VectorXd& gamma,
                                    const Eigen::VectorXd& gamma0,
                                    const WeakInformativityConfig& cfg);

}  // namespace conflictlab
