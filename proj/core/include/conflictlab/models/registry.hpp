#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "conflictlab/simulator_model.hpp"

namespace conflictlab::models {

/// A named model plus its full parameter/summary table layout for dataset
/// export. `draw_full` simulates one row of the full parameter vector and the
/// full summary vector (which for gk_mv is wider than the check-view summary).
struct ModelBundle {
    std::shared_ptr<SimulatorModel> model;
    std::vector<std::string> theta_names;
    std::vector<std::string> summary_names;
    std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(const Eigen::VectorXd& gamma, Rng&)>
        draw_full;
};

/// Models available to the CLI: "logistic", "gk_mv", "boombust".
ModelBundle make_model(const std::string& name);

std::vector<std::string> model_names();

}  // namespace conflictlab::models
