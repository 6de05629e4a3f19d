#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "conflictlab/errors.hpp"
#include "conflictlab/gaussian_mixture.hpp"
#include "support/test_helpers.hpp"

using conflictlab::GaussianMixture;
using conflictlab::Rng;

namespace {

GaussianMixture standard_normal_1d() {
    return GaussianMixture({1.0}, {Eigen::VectorXd::Zero(1)}, {Eigen::MatrixXd::Identity(1, 1)});
}

}  // namespace

TEST_CASE("construction enforces the basic invariants") {
    const Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
    const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);

    CHECK_THROWS_AS(GaussianMixture({0.5, 0.6}, {mu, mu}, {cov, cov}), std::invalid_argument);
    CHECK_THROWS_AS(GaussianMixture({-0.5, 1.5}, {mu, mu}, {cov, cov}), std::invalid_argument);
    CHECK_THROWS_AS(GaussianMixture({1.0}, {mu}, {Eigen::MatrixXd::Zero(2, 2)}),
                    conflictlab::numeric_error);

    Eigen::MatrixXd asym = cov;
    asym(0, 1) = 0.1;  // not symmetric
    CHECK_THROWS_AS(GaussianMixture({1.0}, {mu}, {asym}), std::invalid_argument);

    Eigen::MatrixXd notpd(2, 2);
    notpd << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(GaussianMixture({1.0}, {mu}, {notpd}), conflictlab::numeric_error);

    CHECK_THROWS_AS(GaussianMixture({1.0}, {Eigen::VectorXd::Zero(3)}, {cov}), std::invalid_argument);
}

TEST_CASE("log_density of the standard normal at the origin") {
    const GaussianMixture m = standard_normal_1d();
    CHECK(m.log_density(Eigen::VectorXd::Zero(1)) ==
          doctest::Approx(-0.91893853320467274).epsilon(1e-12));
}

TEST_CASE("duplicate components collapse to the single-component density") {
    const GaussianMixture one = standard_normal_1d();
    const GaussianMixture two({0.5, 0.5}, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)},
                              {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)});
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.7);
    CHECK(two.log_density(x) == doctest::Approx(one.log_density(x)).epsilon(1e-14));
    CHECK_THROWS_AS(one.log_density(Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("exp(log_density) matches the naive component sum on a grid") {
    Rng rng(7);
    const GaussianMixture m = testsupport::random_mixture(2, 3, rng);
    for (double x0 = -6.0; x0 <= 6.0; x0 += 1.5) {
        for (double x1 = -6.0; x1 <= 6.0; x1 += 1.5) {
            const Eigen::VectorXd x = (Eigen::VectorXd(2) << x0, x1).finished();
            const double naive = testsupport::naive_mixture_density(m, x);
            if (naive < 1e-290) continue;  // naive sum underflows there
            CHECK(std::exp(m.log_density(x)) == doctest::Approx(naive).epsilon(1e-10));
        }
    }
}

TEST_CASE("sample mean honors the law of large numbers") {
    Rng rng(11);
    Eigen::VectorXd mu(2);
    mu << 3.0, -1.0;
    Eigen::MatrixXd cov(2, 2);
    cov << 2.0, 0.6, 0.6, 1.0;
    const GaussianMixture m({1.0}, {mu}, {cov});
    const int n = 100000;
    const Eigen::MatrixXd draws = m.sample(n, rng);
    for (int c = 0; c < 2; ++c) {
        const double se = std::sqrt(cov(c, c) / n);
        CHECK(std::abs(draws.col(c).mean() - mu[c]) < 4.0 * se);
    }
    CHECK_THROWS_AS(m.sample(0, rng), std::invalid_argument);
}

TEST_CASE("degenerate weight sends every draw to the live component") {
    Rng rng(13);
    const GaussianMixture m({1.0, 0.0},
                            {Eigen::VectorXd::Constant(1, -50.0), Eigen::VectorXd::Constant(1, 50.0)},
                            {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)});
    const Eigen::MatrixXd draws = m.sample(2000, rng);
    CHECK(draws.maxCoeff() < 0.0);
}

TEST_CASE("well-separated mixture reproduces its weights empirically") {
    Rng rng(17);
    const double w0 = 0.3;
    const GaussianMixture m({w0, 1.0 - w0},
                            {Eigen::VectorXd::Constant(1, -10.0), Eigen::VectorXd::Constant(1, 10.0)},
                            {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)});
    const int n = 100000;
    const Eigen::MatrixXd draws = m.sample(n, rng);
    // classify draws by nearest mean
    int first = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(draws(i, 0) + 10.0) < std::abs(draws(i, 0) - 10.0)) ++first;
    }
    const double se = std::sqrt(w0 * (1.0 - w0) / n);
    CHECK(std::abs(static_cast<double>(first) / n - w0) < 4.0 * se);
}

TEST_CASE("conditioning a bivariate normal matches the closed form") {
    Eigen::MatrixXd cov(2, 2);
    cov << 2.0, 1.0, 1.0, 2.0;
    const GaussianMixture m({1.0}, {Eigen::VectorXd::Zero(2)}, {cov});
    const GaussianMixture cond = m.condition({1}, Eigen::VectorXd::Constant(1, 1.0));
    REQUIRE(cond.components() == 1);
    REQUIRE(cond.dimension() == 1);
    CHECK(cond.mean(0)[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cond.covariance(0)(0, 0) == doctest::Approx(1.5).epsilon(1e-12));

    CHECK_THROWS_AS(m.condition({}, Eigen::VectorXd::Zero(0)), std::invalid_argument);
    CHECK_THROWS_AS(m.condition({0, 1}, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("block-diagonal covariance makes the conditional equal the marginal") {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
    cov.topLeftCorner(2, 2) << 2.0, 0.7, 0.7, 1.0;
    cov(2, 2) = 3.0;
    Eigen::VectorXd mu(3);
    mu << 1.0, 2.0, 3.0;
    const GaussianMixture m({1.0}, {mu}, {cov});

    const GaussianMixture cond = m.condition({2}, Eigen::VectorXd::Constant(1, -4.0));
    const GaussianMixture marg = m.marginal({0, 1});
    CHECK((cond.mean(0) - marg.mean(0)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((cond.covariance(0) - marg.covariance(0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conditional density equals the grid-normalized joint slice") {
    Rng rng(23);
    for (int rep = 0; rep < 3; ++rep) {
        const GaussianMixture m = testsupport::random_mixture(2, 2 + rep % 3, rng);
        const double zstar = m.mean()[1] + 0.5;
        const GaussianMixture cond = m.condition({1}, Eigen::VectorXd::Constant(1, zstar));

        const auto joint_slice = [&](double t) {
            return std::exp(m.log_density((Eigen::VectorXd(2) << t, zstar).finished()));
        };
        const double norm = testsupport::simpson(joint_slice, -60.0, 60.0, 40000);
        const double center = cond.mean()[0];
        for (int i = 0; i < 50; ++i) {
            const double t = center - 5.0 + 10.0 * i / 49.0;
            const double expected = joint_slice(t) / norm;
            const double got = std::exp(cond.log_density(Eigen::VectorXd::Constant(1, t)));
            if (expected > 1e-12) {
                CHECK(got == doctest::Approx(expected).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("conditional weights sum to one for random observed values") {
    Rng rng(29);
    for (int rep = 0; rep < 5; ++rep) {
        const GaussianMixture m = testsupport::random_mixture(3, 3, rng);
        std::normal_distribution<double> gauss(0.0, 3.0);
        const GaussianMixture cond =
            m.condition({0, 2}, (Eigen::VectorXd(2) << gauss(rng), gauss(rng)).finished());
        double sum = 0.0;
        for (double w : cond.weights()) sum += w;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("marginal keeps weights and slices moments") {
    const GaussianMixture m({1.0}, {(Eigen::VectorXd(2) << 1.0, 2.0).finished()},
                            {(Eigen::MatrixXd(2, 2) << 3.0, 0.0, 0.0, 4.0).finished()});
    const GaussianMixture kept = m.marginal({0, 1});
    CHECK(kept.dimension() == 2);
    CHECK((kept.mean(0) - m.mean(0)).cwiseAbs().maxCoeff() == 0.0);

    const GaussianMixture first = m.marginal({0});
    CHECK(first.mean(0)[0] == doctest::Approx(1.0));
    CHECK(first.covariance(0)(0, 0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(m.marginal({}), std::invalid_argument);
}

TEST_CASE("marginal density equals the joint integrated over the dropped coordinate") {
    Rng rng(31);
    const GaussianMixture m = testsupport::random_mixture(2, 3, rng);
    const GaussianMixture marg = m.marginal({0});
    for (double t : {-2.0, 0.0, 1.0, 3.5}) {
        const auto integrand = [&](double z) {
            return std::exp(m.log_density((Eigen::VectorXd(2) << t, z).finished()));
        };
        const double expected = testsupport::simpson(integrand, -60.0, 60.0, 40000);
        const double got = std::exp(marg.log_density(Eigen::VectorXd::Constant(1, t)));
        if (expected > 1e-12) CHECK(got == doctest::Approx(expected).epsilon(1e-4));
    }
}

TEST_CASE("condition and marginal commute with the closed Gaussian formulas") {
    Rng rng(37);
    const Eigen::MatrixXd cov = testsupport::random_spd(3, rng);
    Eigen::VectorXd mu(3);
    mu << 0.5, -1.0, 2.0;
    const GaussianMixture m({1.0}, {mu}, {cov});

    const Eigen::VectorXd v = Eigen::VectorXd::Constant(1, 1.2);
    const GaussianMixture cond = m.condition({2}, v);
    // direct Schur complement
    const Eigen::MatrixXd a = cov.topLeftCorner(2, 2);
    const Eigen::MatrixXd b = cov.topRightCorner(2, 1);
    const double czz = cov(2, 2);
    const Eigen::VectorXd mu_direct = mu.head(2) + b * ((v[0] - mu[2]) / czz);
    const Eigen::MatrixXd cov_direct = a - b * b.transpose() / czz;
    CHECK((cond.mean(0) - mu_direct).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((cond.covariance(0) - cov_direct).cwiseAbs().maxCoeff() < 1e-10);
}
