#include "conflictlab/mixture_fit.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "conflictlab/errors.hpp"
#include "conflictlab/parallel.hpp"

namespace conflictlab {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kPruneWeight = 1e-8;

struct EmState {
    std::vector<double> w;
    std::vector<Eigen::VectorXd> mu;
    std::vector<Eigen::MatrixXd> cov;

    int components() const { return static_cast<int>(w.size()); }
};

double default_ridge(const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows();
    if (n < 2) return 1e-12;
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const double mean_var =
        (data.rowwise() - mean).array().square().colwise().sum().mean() / static_cast<double>(n - 1);
    return mean_var > 0.0 ? 1e-6 * mean_var : 1e-12;
}

void apply_structure(Eigen::MatrixXd& cov, CovarianceStructure structure, double ridge) {
    if (structure == CovarianceStructure::Diagonal) {
        cov = cov.diagonal().asDiagonal();
    }
    cov.diagonal().array() += ridge;
}

/// k-means++ center seeding followed by a hard assignment; returns the
/// initial mixture state.
EmState init_kmeanspp(const Eigen::MatrixXd& data, int k, CovarianceStructure structure,
                      double ridge, Rng& rng) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();

    std::vector<Eigen::Index> centers;
    centers.reserve(static_cast<std::size_t>(k));
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centers.push_back(first(rng));
    Eigen::VectorXd dist2 = (data.rowwise() - data.row(centers[0])).rowwise().squaredNorm();
    for (int j = 1; j < k; ++j) {
        const double total = dist2.sum();
        Eigen::Index pick;
        if (total <= 0.0) {
            pick = first(rng);
        } else {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= dist2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pick);
        dist2 = dist2.cwiseMin((data.rowwise() - data.row(pick)).rowwise().squaredNorm());
    }

    std::vector<Eigen::Index> assign(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index arg = 0;
        for (int j = 0; j < k; ++j) {
            const double dd = (data.row(i) - data.row(centers[static_cast<std::size_t>(j)])).squaredNorm();
            if (dd < best) {
                best = dd;
                arg = j;
            }
        }
        assign[static_cast<std::size_t>(i)] = arg;
    }

    const Eigen::RowVectorXd grand_mean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - grand_mean;
    Eigen::MatrixXd global_cov = (centered.transpose() * centered) / std::max<double>(1.0, n - 1.0);

    EmState st;
    st.w.assign(static_cast<std::size_t>(k), 0.0);
    st.mu.assign(static_cast<std::size_t>(k), Eigen::VectorXd::Zero(d));
    st.cov.assign(static_cast<std::size_t>(k), Eigen::MatrixXd::Zero(d, d));
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(assign[static_cast<std::size_t>(i)]);
        counts[j] += 1;
        st.mu[j] += data.row(i).transpose();
    }
    for (int j = 0; j < k; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (counts[sj] == 0) {
            // duplicate seed points can leave a cluster empty; restart it on a
            // random observation with the global covariance
            st.mu[sj] = data.row(first(rng)).transpose();
            counts[sj] = 1;
            st.cov[sj] = global_cov;
        } else {
            st.mu[sj] /= static_cast<double>(counts[sj]);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(assign[static_cast<std::size_t>(i)]);
        const Eigen::VectorXd diff = data.row(i).transpose() - st.mu[j];
        st.cov[j] += diff * diff.transpose();
    }
    for (int j = 0; j < k; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (counts[sj] >= 2) {
            st.cov[sj] /= static_cast<double>(counts[sj]);
        } else {
            st.cov[sj] = global_cov;
        }
        apply_structure(st.cov[sj], structure, ridge);
        st.w[sj] = static_cast<double>(counts[sj]) / static_cast<double>(n);
    }
    const double wsum = std::accumulate(st.w.begin(), st.w.end(), 0.0);
    for (double& w : st.w) w /= wsum;
    return st;
}

struct EStepResult {
    double log_likelihood;
    Eigen::MatrixXd resp;  // n x k
};

EStepResult e_step(const Eigen::MatrixXd& data, const EmState& st) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    const int k = st.components();
    Eigen::MatrixXd logp(n, k);
    for (int j = 0; j < k; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        Eigen::LLT<Eigen::MatrixXd> llt(st.cov[sj]);
        if (llt.info() != Eigen::Success) {
            throw numeric_error("fit_em: component covariance became singular; increase ridge");
        }
        const Eigen::MatrixXd l = llt.matrixL();
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) log_det += std::log(l(i, i));
        log_det *= 2.0;
        Eigen::MatrixXd y = (data.rowwise() - st.mu[sj].transpose()).transpose();
        l.triangularView<Eigen::Lower>().solveInPlace(y);
        const Eigen::VectorXd quad = y.colwise().squaredNorm().transpose();
        logp.col(j) =
            (-0.5 * (quad.array() + static_cast<double>(d) * kLogTwoPi + log_det) + std::log(st.w[sj]))
                .matrix();
    }
    const Eigen::VectorXd row_max = logp.rowwise().maxCoeff();
    Eigen::MatrixXd shifted = (logp.colwise() - row_max).array().exp();
    const Eigen::VectorXd row_sum = shifted.rowwise().sum();
    EStepResult out;
    out.log_likelihood = (row_max.array() + row_sum.array().log()).sum();
    out.resp = shifted.array().colwise() / row_sum.array();
    return out;
}

/// Returns the number of components pruned for negligible weight.
int m_step(const Eigen::MatrixXd& data, const Eigen::MatrixXd& resp, CovarianceStructure structure,
           double ridge, EmState& st) {
    const Eigen::Index n = data.rows();
    const int k = st.components();
    const Eigen::VectorXd nj = resp.colwise().sum().transpose();

    EmState next;
    int pruned = 0;
    for (int j = 0; j < k; ++j) {
        const double weight = nj[j] / static_cast<double>(n);
        if (weight < kPruneWeight) {
            ++pruned;
            continue;
        }
        const Eigen::VectorXd mu = (resp.col(j).transpose() * data).transpose() / nj[j];
        const Eigen::MatrixXd centered = data.rowwise() - mu.transpose();
        const Eigen::MatrixXd weighted = centered.array().colwise() * resp.col(j).array();
        Eigen::MatrixXd cov = (centered.transpose() * weighted) / nj[j];
        cov = ((cov + cov.transpose()) / 2.0).eval();
        apply_structure(cov, structure, ridge);
        next.w.push_back(weight);
        next.mu.push_back(mu);
        next.cov.push_back(cov);
    }
    if (next.w.empty()) throw numeric_error("fit_em: every component collapsed");
    const double wsum = std::accumulate(next.w.begin(), next.w.end(), 0.0);
    for (double& w : next.w) w /= wsum;
    st = std::move(next);
    return pruned;
}

FitResult run_em_once(const Eigen::MatrixXd& data, int k, CovarianceStructure structure,
                      const FitConfig& cfg, double ridge, std::uint64_t seed) {
    Rng rng(seed);
    EmState st = init_kmeanspp(data, k, structure, ridge, rng);

    std::vector<double> trace;
    trace.reserve(64);
    double prev_ll = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int pruned = 0;
    int iterations = 0;
    double ll = prev_ll;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        EStepResult e = e_step(data, st);
        ll = e.log_likelihood;
        trace.push_back(ll);
        iterations = it + 1;
        if (it > 0 && std::abs(ll - prev_ll) <= cfg.em_tolerance * std::abs(prev_ll)) {
            converged = true;
            break;
        }
        prev_ll = ll;
        pruned += m_step(data, e.resp, structure, ridge, st);
    }

    FitResult out{GaussianMixture(st.w, st.mu, st.cov), ll, std::move(trace), k,
                  pruned,                               converged, iterations};
    return out;
}

void check_data(const Eigen::MatrixXd& data, int k) {
    if (data.rows() < 1 || data.cols() < 1) throw std::invalid_argument("fit_em: empty data");
    if (!data.allFinite()) throw std::invalid_argument("fit_em: data contains non-finite values");
    if (k < 1) throw std::invalid_argument("fit_em: k must be >= 1");
    if (data.rows() <= static_cast<Eigen::Index>(k) * data.cols()) {
        throw std::invalid_argument("fit_em: need more than k*d observations");
    }
}

}  // namespace

std::string to_string(CovarianceStructure s) {
    return s == CovarianceStructure::Full ? "full" : "diagonal";
}

CovarianceStructure covariance_structure_from_string(const std::string& s) {
    if (s == "full") return CovarianceStructure::Full;
    if (s == "diagonal") return CovarianceStructure::Diagonal;
    throw std::invalid_argument("unknown covariance structure: " + s);
}

int mixture_parameter_count(CovarianceStructure structure, int dim, int k) {
    const int per_cov = structure == CovarianceStructure::Full ? dim * (dim + 1) / 2 : dim;
    return (k - 1) + k * dim + k * per_cov;
}

void FitConfig::validate() const {
    if (max_components < 1) throw std::invalid_argument("FitConfig: max_components must be >= 1");
    if (!(em_tolerance > 0.0)) throw std::invalid_argument("FitConfig: em_tolerance must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("FitConfig: max_iterations must be >= 1");
    if (restarts < 1) throw std::invalid_argument("FitConfig: restarts must be >= 1");
    if (ridge && !(*ridge >= 0.0)) throw std::invalid_argument("FitConfig: ridge must be >= 0");
    if (covariance_structures.empty()) {
        throw std::invalid_argument("FitConfig: at least one covariance structure required");
    }
}

FitResult fit_em(const Eigen::MatrixXd& data, int k, CovarianceStructure structure,
                 const FitConfig& cfg, Rng& rng) {
    cfg.validate();
    check_data(data, k);
    const double ridge = cfg.ridge ? *cfg.ridge : default_ridge(data);
    const std::uint64_t base = rng();

    const int restarts = k == 1 ? 1 : cfg.restarts;  // k = 1 has a unique optimum
    std::vector<std::optional<FitResult>> runs(static_cast<std::size_t>(restarts));
    std::vector<std::string> failures(static_cast<std::size_t>(restarts));
    parallel_for(static_cast<std::size_t>(restarts), cfg.workers, [&](std::size_t r) {
        try {
            runs[r] = run_em_once(data, k, structure, cfg, ridge,
                                  derive_seed(base, {static_cast<std::uint64_t>(r)}));
        } catch (const std::exception& e) {
            failures[r] = e.what();
        }
    });

    int best = -1;
    for (int r = 0; r < restarts; ++r) {
        const auto& run = runs[static_cast<std::size_t>(r)];
        if (!run) continue;
        if (best < 0 || run->log_likelihood > runs[static_cast<std::size_t>(best)]->log_likelihood) {
            best = r;
        }
    }
    if (best < 0) {
        throw numeric_error("fit_em: all restarts failed (" + failures[0] + ")");
    }
    return std::move(*runs[static_cast<std::size_t>(best)]);
}

FitResult fit_em(const Eigen::MatrixXd& data, int k, CovarianceStructure structure,
                 const FitConfig& cfg) {
    Rng rng(cfg.seed);
    return fit_em(data, k, structure, cfg, rng);
}

SelectResult select_bic(const Eigen::MatrixXd& data, const FitConfig& cfg, Rng& rng) {
    cfg.validate();
    check_data(data, 1);
    const Eigen::Index n = data.rows();
    const int d = static_cast<int>(data.cols());
    const double ridge = cfg.ridge ? *cfg.ridge : default_ridge(data);
    const double log_n = std::log(static_cast<double>(n));
    const std::uint64_t base = rng();

    struct Job {
        std::size_t structure_idx;
        int k;
        int restart;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < cfg.covariance_structures.size(); ++s) {
        for (int k = 1; k <= cfg.max_components; ++k) {
            if (n <= static_cast<Eigen::Index>(k) * d) continue;
            const int restarts = k == 1 ? 1 : cfg.restarts;
            for (int r = 0; r < restarts; ++r) jobs.push_back({s, k, r});
        }
    }
    if (jobs.empty()) throw std::invalid_argument("select_bic: no feasible component count for this data size");

    std::vector<std::optional<FitResult>> runs(jobs.size());
    parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
        const Job& job = jobs[i];
        const std::uint64_t seed =
            derive_seed(base, {static_cast<std::uint64_t>(job.structure_idx),
                               static_cast<std::uint64_t>(job.k), static_cast<std::uint64_t>(job.restart)});
        try {
            runs[i] = run_em_once(data, job.k, cfg.covariance_structures[job.structure_idx], cfg,
                                  ridge, seed);
        } catch (const std::exception&) {
            runs[i] = std::nullopt;  // collapsed restart; others may survive
        }
    });

    std::vector<SelectResult::Candidate> table;
    std::optional<FitResult> best_fit;
    double best_bic = -std::numeric_limits<double>::infinity();
    int best_k = 0;
    CovarianceStructure best_structure = CovarianceStructure::Full;
    for (std::size_t s = 0; s < cfg.covariance_structures.size(); ++s) {
        const CovarianceStructure structure = cfg.covariance_structures[s];
        for (int k = 1; k <= cfg.max_components; ++k) {
            SelectResult::Candidate cand;
            cand.k = k;
            cand.structure = structure;
            cand.feasible = n > static_cast<Eigen::Index>(k) * d;
            if (cand.feasible) {
                std::optional<FitResult> local;
                for (std::size_t i = 0; i < jobs.size(); ++i) {
                    if (jobs[i].structure_idx != s || jobs[i].k != k || !runs[i]) continue;
                    if (!local || runs[i]->log_likelihood > local->log_likelihood) local = runs[i];
                }
                cand.feasible = local.has_value();
                if (local) {
                    cand.converged = local->converged;
                    cand.components = local->mixture.components();
                    cand.log_likelihood = local->log_likelihood;
                    const int p = mixture_parameter_count(structure, d, cand.components);
                    cand.bic = 2.0 * cand.log_likelihood - p * log_n;
                    if (cand.bic > best_bic) {
                        best_bic = cand.bic;
                        best_fit = std::move(local);
                        best_k = k;
                        best_structure = structure;
                    }
                }
            }
            table.push_back(cand);
        }
    }
    if (!best_fit) throw numeric_error("select_bic: every candidate fit failed");
    return SelectResult{std::move(*best_fit), best_k, best_structure, best_bic, std::move(table)};
}

SelectResult select_bic(const Eigen::MatrixXd& data, const FitConfig& cfg) {
    Rng rng(cfg.seed);
    return select_bic(data, cfg, rng);
}

}  // namespace conflictlab
