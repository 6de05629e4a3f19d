#include "conflictlab/serialization.hpp"

#include <stdexcept>

namespace conflictlab {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
    return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a JSON array of rows");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols) {
            throw std::invalid_argument("ragged JSON matrix");
        }
        m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r]).transpose();
    }
    return m;
}

}  // namespace

nlohmann::json mixture_to_json(const GaussianMixture& m) {
    nlohmann::json j;
    j["weights"] = m.weights();
    nlohmann::json means = nlohmann::json::array();
    nlohmann::json covs = nlohmann::json::array();
    for (int c = 0; c < m.components(); ++c) {
        means.push_back(vector_to_json(m.mean(c)));
        covs.push_back(matrix_to_json(m.covariance(c)));
    }
    j["means"] = means;
    j["covariances"] = covs;
    return j;
}

GaussianMixture mixture_from_json(const nlohmann::json& j) {
    for (const char* key : {"weights", "means", "covariances"}) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("mixture JSON missing \"") + key + '"');
    }
    const auto weights = j["weights"].get<std::vector<double>>();
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
    for (const auto& m : j["means"]) means.push_back(vector_from_json(m));
    for (const auto& c : j["covariances"]) covs.push_back(matrix_from_json(c));
    return GaussianMixture(weights, std::move(means), std::move(covs));
}

nlohmann::json check_result_to_json(const ConflictCheckResult& r) {
    nlohmann::json j;
    j["g_obs"] = r.g_obs;
    j["p_value"] = r.p_value;
    j["g_replicates"] = r.g_replicates;
    j["z_obs_mahalanobis"] = r.z_obs_mahalanobis;
    j["joint_fit_summary"] = {{"components", r.joint_fit_summary.components},
                              {"bic", r.joint_fit_summary.bic},
                              {"structure", to_string(r.joint_fit_summary.structure)}};
    return j;
}

ConflictCheckResult check_result_from_json(const nlohmann::json& j) {
    ConflictCheckResult r;
    r.g_obs = j.at("g_obs").get<double>();
    r.p_value = j.at("p_value").get<double>();
    r.g_replicates = j.at("g_replicates").get<std::vector<double>>();
    r.z_obs_mahalanobis = j.at("z_obs_mahalanobis").get<double>();
    const auto& s = j.at("joint_fit_summary");
    r.joint_fit_summary.components = s.at("components").get<int>();
    r.joint_fit_summary.bic = s.at("bic").get<double>();
    r.joint_fit_summary.structure = covariance_structure_from_string(s.at("structure").get<std::string>());
    return r;
}

nlohmann::json wi_report_to_json(const WeakInformativityReport& r) {
    nlohmann::json j;
    j["gamma_points"] = matrix_to_json(r.gamma_points);
    j["w_alpha"] = r.w_alpha;
    j["w_alpha_se"] = r.w_alpha_se;
    j["x_alpha"] = r.x_alpha;
    j["delta"] = r.delta;
    j["best_gamma"] = vector_to_json(r.best_gamma);
    j["satisfying_points"] = matrix_to_json(r.satisfying_points);
    if (r.lhs_criterion) j["lhs_criterion"] = *r.lhs_criterion;
    return j;
}

nlohmann::json select_result_to_json(const SelectResult& r) {
    nlohmann::json j;
    j["selected"] = {{"k", r.k},
                     {"structure", to_string(r.structure)},
                     {"bic", r.bic},
                     {"log_likelihood", r.fit.log_likelihood},
                     {"components", r.fit.mixture.components()},
                     {"pruned_components", r.fit.pruned_components},
                     {"converged", r.fit.converged}};
    nlohmann::json table = nlohmann::json::array();
    for (const auto& c : r.table) {
        nlohmann::json row;
        row["k"] = c.k;
        row["structure"] = to_string(c.structure);
        row["feasible"] = c.feasible;
        if (c.feasible) {
            row["converged"] = c.converged;
            row["components"] = c.components;
            row["log_likelihood"] = c.log_likelihood;
            row["bic"] = c.bic;
        }
        table.push_back(row);
    }
    j["candidates"] = table;
    return j;
}

}  // namespace conflictlab
