#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "conflictlab/mixture_fit.hpp"
#include "support/test_helpers.hpp"

using namespace conflictlab;

namespace {

Eigen::MatrixXd normal_column(double mean, double sd, int n, Rng& rng) {
    std::normal_distribution<double> gauss(mean, sd);
    Eigen::MatrixXd out(n, 1);
    for (int i = 0; i < n; ++i) out(i, 0) = gauss(rng);
    return out;
}

FitConfig fast_cfg() {
    FitConfig cfg;
    cfg.max_components = 6;
    cfg.restarts = 3;
    return cfg;
}

}  // namespace

TEST_CASE("k = 1 recovers the sample moments of a single Gaussian") {
    Rng rng(211);
    const int n = 10000;
    const Eigen::MatrixXd data = normal_column(5.0, std::sqrt(2.0), n, rng);
    const double sample_mean = data.col(0).mean();
    const double sample_var =
        (data.col(0).array() - sample_mean).square().sum() / static_cast<double>(n);

    FitConfig cfg;
    Rng fit_rng(1);
    const FitResult fit = fit_em(data, 1, CovarianceStructure::Full, cfg, fit_rng);
    REQUIRE(fit.mixture.components() == 1);
    CHECK(fit.mixture.mean(0)[0] == doctest::Approx(sample_mean).epsilon(1e-8));
    CHECK(fit.mixture.covariance(0)(0, 0) == doctest::Approx(sample_var).epsilon(1e-4));
    CHECK(std::abs(fit.mixture.mean(0)[0] - 5.0) < 0.1);
    CHECK(std::abs(fit.mixture.covariance(0)(0, 0) - 2.0) < 0.2);
    CHECK(fit.converged);
}

TEST_CASE("log-likelihood trace is monotone non-decreasing") {
    Rng rng(223);
    Eigen::MatrixXd data(3000, 2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 3000; ++i) {
        const double shift = (i % 3 == 0) ? -4.0 : (i % 3 == 1 ? 0.0 : 5.0);
        data(i, 0) = gauss(rng) + shift;
        data(i, 1) = 0.5 * gauss(rng) + 0.2 * shift;
    }
    FitConfig cfg;
    Rng fit_rng(2);
    const FitResult fit = fit_em(data, 3, CovarianceStructure::Full, cfg, fit_rng);
    REQUIRE(fit.log_likelihood_trace.size() >= 2);
    for (std::size_t i = 1; i < fit.log_likelihood_trace.size(); ++i) {
        const double prev = fit.log_likelihood_trace[i - 1];
        const double cur = fit.log_likelihood_trace[i];
        CHECK(cur >= prev - 1e-8 * std::abs(prev));
    }
    CHECK(fit.log_likelihood == fit.log_likelihood_trace.back());
}

TEST_CASE("two well-separated clusters match the k-means oracle") {
    Rng rng(227);
    const int n = 4000;
    Eigen::MatrixXd data(n, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i) data(i, 0) = gauss(rng) + (i < n / 2 ? -10.0 : 10.0);

    Eigen::MatrixXd centers(2, 1);
    centers << -1.0, 1.0;
    const Eigen::MatrixXd km = testsupport::kmeans(data, centers, 30);

    FitConfig cfg;
    Rng fit_rng(3);
    const FitResult fit = fit_em(data, 2, CovarianceStructure::Full, cfg, fit_rng);
    REQUIRE(fit.mixture.components() == 2);
    const bool first_low = fit.mixture.mean(0)[0] < fit.mixture.mean(1)[0];
    const double lo = fit.mixture.mean(first_low ? 0 : 1)[0];
    const double hi = fit.mixture.mean(first_low ? 1 : 0)[0];
    CHECK(std::abs(lo - -10.0) < 0.2);
    CHECK(std::abs(hi - 10.0) < 0.2);
    CHECK(std::abs(lo - km.col(0).minCoeff()) < 0.2);
    CHECK(std::abs(hi - km.col(0).maxCoeff()) < 0.2);
    for (double w : fit.mixture.weights()) CHECK(std::abs(w - 0.5) < 0.05);
}

TEST_CASE("select_bic picks one component for single-Gaussian data") {
    int hits = 0;
    for (int rep = 0; rep < 10; ++rep) {
        Rng rng(300 + rep);
        const Eigen::MatrixXd data = normal_column(1.0, 2.0, 5000, rng);
        FitConfig cfg = fast_cfg();
        Rng fit_rng(400 + rep);
        const SelectResult sel = select_bic(data, cfg, fit_rng);
        if (sel.k == 1) ++hits;
    }
    CHECK(hits >= 9);
}

TEST_CASE("select_bic recovers three well-separated components") {
    int hits = 0;
    for (int rep = 0; rep < 10; ++rep) {
        Rng rng(500 + rep);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::MatrixXd data(3000, 1);
        for (int i = 0; i < 3000; ++i) {
            data(i, 0) = gauss(rng) + (i % 3 == 0 ? -12.0 : (i % 3 == 1 ? 0.0 : 12.0));
        }
        FitConfig cfg = fast_cfg();
        Rng fit_rng(600 + rep);
        const SelectResult sel = select_bic(data, cfg, fit_rng);
        if (sel.mixture().components() == 3) ++hits;
    }
    CHECK(hits >= 9);
}

TEST_CASE("free parameter counting") {
    CHECK(mixture_parameter_count(CovarianceStructure::Full, 3, 4) == 4 - 1 + 4 * 3 + 4 * 6);
    CHECK(mixture_parameter_count(CovarianceStructure::Diagonal, 3, 4) == 4 - 1 + 4 * 3 + 4 * 3);
    CHECK(mixture_parameter_count(CovarianceStructure::Full, 1, 1) == 2);
}

TEST_CASE("selected BIC dominates every candidate in the table") {
    Rng rng(701);
    Eigen::MatrixXd data(1500, 2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 1500; ++i) {
        data(i, 0) = gauss(rng) + (i % 2 ? 3.0 : -3.0);
        data(i, 1) = gauss(rng);
    }
    FitConfig cfg = fast_cfg();
    Rng fit_rng(5);
    const SelectResult sel = select_bic(data, cfg, fit_rng);
    for (const auto& cand : sel.table) {
        if (cand.feasible) CHECK(sel.bic >= cand.bic);
    }
    // both structures were swept
    bool saw_full = false, saw_diag = false;
    for (const auto& cand : sel.table) {
        saw_full = saw_full || cand.structure == CovarianceStructure::Full;
        saw_diag = saw_diag || cand.structure == CovarianceStructure::Diagonal;
    }
    CHECK(saw_full);
    CHECK(saw_diag);
}

TEST_CASE("fits are deterministic given the seed") {
    Rng rng(702);
    Eigen::MatrixXd data(800, 2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 800; ++i) {
        data(i, 0) = gauss(rng) + (i % 2 ? 2.5 : -2.5);
        data(i, 1) = gauss(rng);
    }
    FitConfig cfg = fast_cfg();
    cfg.seed = 77;
    const SelectResult a = select_bic(data, cfg);
    const SelectResult b = select_bic(data, cfg);
    REQUIRE(a.k == b.k);
    REQUIRE(a.structure == b.structure);
    CHECK(a.bic == b.bic);
    for (int j = 0; j < a.mixture().components(); ++j) {
        CHECK((a.mixture().mean(j) - b.mixture().mean(j)).cwiseAbs().maxCoeff() == 0.0);
    }

    cfg.workers = 2;
    const SelectResult c = select_bic(data, cfg);
    CHECK(c.bic == a.bic);  // thread count must not change the result
}

TEST_CASE("input validation") {
    Rng rng(703);
    Eigen::MatrixXd bad(10, 2);
    bad.setZero();
    bad(3, 1) = std::numeric_limits<double>::quiet_NaN();
    FitConfig cfg;
    Rng fit_rng(6);
    CHECK_THROWS_AS(fit_em(bad, 1, CovarianceStructure::Full, cfg, fit_rng), std::invalid_argument);

    const Eigen::MatrixXd tiny = Eigen::MatrixXd::Random(6, 2);
    CHECK_THROWS_AS(fit_em(tiny, 3, CovarianceStructure::Full, cfg, fit_rng),
                    std::invalid_argument);

    FitConfig negative;
    negative.em_tolerance = 0.0;
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("awkward data still yields a valid normalized mixture") {
    // many exact duplicates; the ridge keeps covariances positive definite
    Rng rng(704);
    Eigen::MatrixXd data(600, 1);
    for (int i = 0; i < 600; ++i) data(i, 0) = (i % 2 == 0) ? 1.0 : 4.0;
    FitConfig cfg;
    Rng fit_rng(7);
    const FitResult fit = fit_em(data, 2, CovarianceStructure::Full, cfg, fit_rng);
    double sum = 0.0;
    for (double w : fit.mixture.weights()) {
        CHECK(w >= 1e-8);
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}
