#include "conflictlab/models/registry.hpp"

#include <stdexcept>

#include "conflictlab/errors.hpp"
#include "conflictlab/models/boom_bust.hpp"
#include "conflictlab/models/gk_multivariate.hpp"
#include "conflictlab/models/logistic_bioassay.hpp"

namespace conflictlab::models {

namespace {

std::pair<Eigen::VectorXd, Eigen::VectorXd> retry_full(
    const std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(Rng&)>& draw, Rng& rng) {
    constexpr int kMaxRetries = 100;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        try {
            return draw(rng);
        } catch (const simulation_failure&) {
        }
    }
    throw simulation_failure("simulation kept failing after 100 redraws");
}

}  // namespace

ModelBundle make_model(const std::string& name) {
    if (name == "logistic") {
        auto model = std::make_shared<LogisticBioassay>();
        ModelBundle b;
        b.model = model;
        b.theta_names = {"theta_1", "theta_2"};
        b.summary_names = {"count_1", "count_2", "count_3", "count_4"};
        b.draw_full = [model](const Eigen::VectorXd& gamma, Rng& rng) {
            return model->draw_joint(gamma, rng);
        };
        return b;
    }
    if (name == "gk_mv") {
        auto model = std::make_shared<GkMultivariate>();
        ModelBundle b;
        b.model = model;
        for (int j = 1; j <= 3; ++j) {
            b.theta_names.push_back("A_" + std::to_string(j));
            b.theta_names.push_back("B_" + std::to_string(j));
            b.theta_names.push_back("g_" + std::to_string(j));
            b.theta_names.push_back("k_" + std::to_string(j));
        }
        b.theta_names.insert(b.theta_names.end(), {"w_1", "w_2", "w_3"});
        for (int j = 1; j <= 3; ++j) {
            b.summary_names.push_back("location_" + std::to_string(j));
            b.summary_names.push_back("scale_" + std::to_string(j));
            b.summary_names.push_back("skewness_" + std::to_string(j));
            b.summary_names.push_back("kurtosis_" + std::to_string(j));
        }
        b.summary_names.insert(b.summary_names.end(), {"rho_12", "rho_13", "rho_23"});
        b.draw_full = [model](const Eigen::VectorXd& gamma, Rng& rng) {
            return retry_full([&](Rng& r) { return model->simulate_full(gamma, r); }, rng);
        };
        return b;
    }
    if (name == "boombust") {
        auto model = std::make_shared<BoomBust>();
        ModelBundle b;
        b.model = model;
        b.theta_names = {"r", "kappa", "alpha", "beta"};
        for (const char* block : {"x", "dx", "rx"}) {
            b.summary_names.push_back(std::string("mean_") + block);
            b.summary_names.push_back(std::string("var_") + block);
            b.summary_names.push_back(std::string("skew_") + block);
            b.summary_names.push_back(std::string("kurt_") + block);
        }
        b.draw_full = [model](const Eigen::VectorXd& gamma, Rng& rng) {
            return retry_full([&](Rng& r) { return model->simulate_full(gamma, r); }, rng);
        };
        return b;
    }
    throw std::invalid_argument("unknown model: " + name +
                                " (expected logistic, gk_mv or boombust)");
}

std::vector<std::string> model_names() { return {"logistic", "gk_mv", "boombust"}; }

}  // namespace conflictlab::models
