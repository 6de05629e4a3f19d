#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <vector>

#include "conflictlab/gaussian_mixture.hpp"
#include "conflictlab/mixture_fit.hpp"
#include "conflictlab/simulator_model.hpp"

namespace conflictlab {

struct CheckConfig {
    /// (theta, z) training draws for the joint mixture fit.
    int n_train = 100000;
    /// Prior-predictive replicates R for the Monte Carlo tail probability.
    int replicates = 1000;
    std::uint64_t seed = 0;
    FitConfig fit;
    int workers = 0;

    /// Hard-validates counts; emits stderr warnings for n_train < 10 R and
    /// for replicates < 100 (p-value resolution coarser than 0.01).
    void validate() const;
};

struct JointFitSummary {
    int components = 0;
    double bic = 0.0;
    CovarianceStructure structure = CovarianceStructure::Full;
};

struct ConflictCheckResult {
    double g_obs = 0.0;
    std::vector<double> g_replicates;  // sorted ascending
    double p_value = 0.0;              // (1/R) #{r : g_replicates[r] >= g_obs}
    JointFitSummary joint_fit_summary;
    /// Mahalanobis distance from z_obs to the nearest component of the fitted
    /// summary marginal; large values flag extrapolation.
    double z_obs_mahalanobis = 0.0;
};

/// The approximate prior-to-posterior divergence statistic: the variational
/// mixture KL from the conditional posterior approximation to the prior.
double divergence_statistic(const GaussianMixture& posterior, const GaussianMixture& prior);

/// Reusable conflict-check state: the joint (theta, z) mixture fit, the prior
/// mixture and the sorted replicate divergences. The replicate set depends
/// only on (model, cfg, seed), so many observed summaries can be evaluated
/// against one instance at the cost of a single conditioning each.
class ConflictCheck {
public:
    /// Simulates cfg.n_train training pairs and cfg.replicates prior
    /// predictive summaries from the model at its base expansion value.
    ConflictCheck(const SimulatorModel& model, const CheckConfig& cfg);

    /// Data-backed variant for externally simulated draws: `train` holds one
    /// (theta, z) pair per row with theta in the leading `theta_dim` columns,
    /// and `replicate_summaries` one prior-predictive z per row. When `prior`
    /// is empty a mixture is fitted to the theta training block.
    ConflictCheck(const Eigen::MatrixXd& train, int theta_dim,
                  const Eigen::MatrixXd& replicate_summaries,
                  std::optional<GaussianMixture> prior, const CheckConfig& cfg);

    ConflictCheckResult evaluate(const Eigen::VectorXd& z_obs) const;
    double divergence_of(const Eigen::VectorXd& z_obs) const;
    double p_value_of_divergence(double g) const;

    const std::vector<double>& replicate_divergences() const { return replicates_; }
    const GaussianMixture& joint_fit() const { return joint_; }
    const GaussianMixture& prior() const { return prior_; }
    const JointFitSummary& joint_fit_summary() const { return summary_; }

private:
    struct Parts;
    static Parts build_parts(const Eigen::MatrixXd& train, int theta_dim,
                             const Eigen::MatrixXd& replicate_summaries,
                             std::optional<GaussianMixture> prior, const CheckConfig& cfg);
    explicit ConflictCheck(Parts&& parts);

    int theta_dim_;
    int summary_dim_;
    GaussianMixture joint_;
    GaussianMixture prior_;
    MixtureConditioner conditioner_;  // on the summary block
    JointFitSummary summary_;
    std::vector<double> replicates_;
};

/// Algorithm-style one-shot check of an observed summary.
ConflictCheckResult run_check(const SimulatorModel& model, const Eigen::VectorXd& z_obs,
                              const CheckConfig& cfg);

}  // namespace conflictlab
