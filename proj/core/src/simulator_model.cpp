#include "conflictlab/simulator_model.hpp"

#include <stdexcept>

#include "conflictlab/errors.hpp"

namespace conflictlab {

GaussianMixture SimulatorModel::analytic_prior(const Eigen::VectorXd&) const {
    throw std::logic_error(name() + ": prior is not Gaussian; fit a mixture to prior draws instead");
}

Eigen::VectorXd SimulatorModel::sample_gamma(Rng& rng) const {
    const Rectangle region = gamma_region();
    Eigen::VectorXd g(region.dim());
    for (int i = 0; i < region.dim(); ++i) {
        std::uniform_real_distribution<double> u(region.lower[i], region.upper[i]);
        g[i] = u(rng);
    }
    return g;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SimulatorModel::draw_joint(const Eigen::VectorXd& gamma,
                                                                       Rng& rng) const {
    constexpr int kMaxRetries = 100;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        Eigen::VectorXd theta = sample_theta(gamma, rng);
        try {
            Eigen::VectorXd z = simulate_summary(theta, rng);
            return {std::move(theta), std::move(z)};
        } catch (const simulation_failure&) {
            // degenerate draw; redraw theta and retry
        }
    }
    throw simulation_failure(name() + ": simulation kept failing after 100 redraws");
}

}  // namespace conflictlab
