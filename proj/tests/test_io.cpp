#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>

#include "conflictlab/csv.hpp"
#include "conflictlab/serialization.hpp"
#include "conflictlab/svg.hpp"
#include "support/test_helpers.hpp"

using namespace conflictlab;

TEST_CASE("mixture JSON round-trips densities to 1e-12") {
    Rng rng(1201);
    const GaussianMixture m = testsupport::random_mixture(3, 4, rng);
    const nlohmann::json j = mixture_to_json(m);
    CHECK(j.contains("weights"));
    CHECK(j.contains("means"));
    CHECK(j.contains("covariances"));
    const GaussianMixture back = mixture_from_json(nlohmann::json::parse(j.dump()));
    std::normal_distribution<double> gauss(0.0, 4.0);
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x(3);
        for (int c = 0; c < 3; ++c) x[c] = gauss(rng);
        CHECK(back.log_density(x) == doctest::Approx(m.log_density(x)).epsilon(1e-12));
    }
}

TEST_CASE("mixture JSON rejects malformed documents") {
    CHECK_THROWS_AS(mixture_from_json(nlohmann::json::parse(R"({"weights":[1.0]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        mixture_from_json(nlohmann::json::parse(
            R"({"weights":[1.0],"means":[[0,0]],"covariances":[[[1,0],[0]]]})")),
        std::invalid_argument);
}

TEST_CASE("check result JSON round trip") {
    ConflictCheckResult r;
    r.g_obs = 1.25;
    r.g_replicates = {0.1, 0.5, 2.0};
    r.p_value = 1.0 / 3.0;
    r.joint_fit_summary = {7, -123.5, CovarianceStructure::Diagonal};
    r.z_obs_mahalanobis = 3.75;
    const ConflictCheckResult back = check_result_from_json(check_result_to_json(r));
    CHECK(back.g_obs == r.g_obs);
    CHECK(back.g_replicates == r.g_replicates);
    CHECK(back.p_value == r.p_value);
    CHECK(back.joint_fit_summary.components == 7);
    CHECK(back.joint_fit_summary.structure == CovarianceStructure::Diagonal);
    CHECK(back.z_obs_mahalanobis == 3.75);
}

TEST_CASE("CSV writes headers and round-trips values bit exactly") {
    CsvTable t;
    t.header = {"a", "b"};
    t.values.resize(3, 2);
    t.values << 1.0, -2.5, 3.14159265358979312, 1e-17, 12345678901234567.0, -0.0;
    const std::string text = csv_to_string(t);
    CHECK(text.substr(0, 4) == "a,b\n");
    const CsvTable back = read_csv_string(text);
    CHECK(back.header == t.header);
    CHECK((back.values - t.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("CSV errors name the offending line") {
    CHECK_THROWS_WITH_AS(read_csv_string("a,b\n1,2\n3,oops\n"),
                         doctest::Contains("line 3"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(read_csv_string("a,b\n1\n"), doctest::Contains("line 2"),
                         std::invalid_argument);
    CHECK_THROWS_AS(read_csv_string(""), std::invalid_argument);
}

TEST_CASE("CSV handles quoted fields and CRLF") {
    const CsvTable t = read_csv_string("\"x\",y\r\n1,2\r\n");
    CHECK(t.header[0] == "x");
    CHECK(t.values(0, 1) == 2.0);
}

TEST_CASE("SVG emitters produce labeled documents") {
    Eigen::VectorXd x(5), y(5);
    x << 1, 2, 3, 4, 5;
    y << 0.1, 0.5, 0.9, 0.4, -0.2;
    const std::string line = svg_line_plot(x, y, "gamma_1");
    CHECK(line.find("<svg") != std::string::npos);
    CHECK(line.find("gamma_1") != std::string::npos);
    CHECK(line.find("W_alpha") != std::string::npos);

    Eigen::VectorXd xs(3), ys(2);
    xs << 1, 2, 3;
    ys << 5, 6;
    Eigen::MatrixXd grid(3, 2);
    grid << 0.0, 0.2, 0.4, 0.6, 0.8, 1.0;
    const std::string heat = svg_heatmap(xs, ys, grid, "gamma_1", "gamma_2");
    CHECK(heat.find("gamma_2") != std::string::npos);
    CHECK(heat.find("<rect") != std::string::npos);

    Eigen::MatrixXd pts(4, 2);
    pts << 1, 1, 2, 3, 4, 2, 5, 5;
    Eigen::VectorXd vals(4);
    vals << 0.0, 0.3, 0.6, 1.0;
    const std::string scatter = svg_scatter(pts, vals, "gamma_1", "gamma_2");
    CHECK(scatter.find("<rect") != std::string::npos);
}
