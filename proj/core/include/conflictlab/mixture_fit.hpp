#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "conflictlab/gaussian_mixture.hpp"
#include "conflictlab/rng.hpp"

namespace conflictlab {

enum class CovarianceStructure { Full, Diagonal };

std::string to_string(CovarianceStructure s);
CovarianceStructure covariance_structure_from_string(const std::string& s);

/// Free parameter count of a k-component mixture in d dimensions.
int mixture_parameter_count(CovarianceStructure structure, int dim, int k);

struct FitConfig {
    int max_components = 15;
    /// Candidate structures swept by select_bic; fit_em takes one explicitly.
    std::vector<CovarianceStructure> covariance_structures{CovarianceStructure::Full,
                                                           CovarianceStructure::Diagonal};
    /// Relative log-likelihood change treated as converged.
    double em_tolerance = 1e-6;
    int max_iterations = 500;
    int restarts = 5;
    /// Added to covariance diagonals each M-step. Unset means
    /// 1e-6 x (mean per-dimension data variance).
    std::optional<double> ridge;
    std::uint64_t seed = 0;
    int workers = 0;

    void validate() const;
};

struct FitResult {
    GaussianMixture mixture;
    double log_likelihood = 0.0;
    /// Log likelihood recorded at the start of every EM iteration;
    /// non-decreasing up to pruning of negligible components.
    std::vector<double> log_likelihood_trace;
    int requested_components = 0;
    int pruned_components = 0;
    bool converged = false;
    int iterations = 0;
};

/// EM fit with k components of the given structure. Initialization is
/// k-means++ seeding of responsibilities; cfg.restarts independent restarts
/// are run (concurrently when cfg.workers allows) and the best final
/// log-likelihood wins. Data rows are observations.
FitResult fit_em(const Eigen::MatrixXd& data, int k, CovarianceStructure structure,
                 const FitConfig& cfg, Rng& rng);

/// Convenience overload seeding the generator from cfg.seed.
FitResult fit_em(const Eigen::MatrixXd& data, int k, CovarianceStructure structure,
                 const FitConfig& cfg);

struct SelectResult {
    struct Candidate {
        int k = 0;
        CovarianceStructure structure = CovarianceStructure::Full;
        bool feasible = false;
        bool converged = false;
        int components = 0;  // after pruning
        double log_likelihood = 0.0;
        double bic = 0.0;
    };

    FitResult fit;
    int k = 0;
    CovarianceStructure structure = CovarianceStructure::Full;
    double bic = 0.0;
    std::vector<Candidate> table;

    const GaussianMixture& mixture() const { return fit.mixture; }
};

/// Fits k = 1..max_components for every structure in cfg and returns the fit
/// maximizing BIC = 2 loglik - p log(n). Candidates with n <= k*d are skipped
/// and marked infeasible in the table.
SelectResult select_bic(const Eigen::MatrixXd& data, const FitConfig& cfg, Rng& rng);
SelectResult select_bic(const Eigen::MatrixXd& data, const FitConfig& cfg);

}  // namespace conflictlab
