#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "conflictlab/csv.hpp"
#include "conflictlab/serialization.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_binary;
fs::path g_work;

int run(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " >" + (g_work / "stdout.txt").string() +
                            " 2>" + (g_work / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("simulate: shapes, headers and determinism") {
    const fs::path out = g_work / "sim_logistic";
    REQUIRE(run("simulate --model logistic --n 10 --seed 5 --out " + out.string()) == 0);
    const conflictlab::CsvTable summaries = conflictlab::read_csv((out / "summaries.csv").string());
    CHECK(summaries.values.rows() == 10);
    CHECK(summaries.values.cols() == 4);
    const conflictlab::CsvTable theta = conflictlab::read_csv((out / "theta.csv").string());
    CHECK(theta.values.rows() == 10);
    CHECK(theta.values.cols() == 2);
    CHECK(theta.header[0] == "theta_1");

    const fs::path out_a = g_work / "sim_bb_a";
    const fs::path out_b = g_work / "sim_bb_b";
    REQUIRE(run("simulate --model boombust --n 5 --seed 11 --out " + out_a.string()) == 0);
    REQUIRE(run("simulate --model boombust --n 5 --seed 11 --out " + out_b.string()) == 0);
    CHECK(slurp(out_a / "summaries.csv") == slurp(out_b / "summaries.csv"));
    CHECK(slurp(out_a / "theta.csv") == slurp(out_b / "theta.csv"));
}

TEST_CASE("simulate: gk_mv emits 15 finite summary columns") {
    const fs::path out = g_work / "sim_gk";
    REQUIRE(run("simulate --model gk_mv --n 1000 --seed 7 --out " + out.string()) == 0);
    const conflictlab::CsvTable summaries = conflictlab::read_csv((out / "summaries.csv").string());
    CHECK(summaries.values.rows() == 1000);
    CHECK(summaries.values.cols() == 15);
    CHECK(summaries.values.allFinite());
}

TEST_CASE("check: outputs, resolution, conflict detection and determinism") {
    const std::string common =
        " --model logistic --n-train 2000 --replicates 100 --max-components 3 --restarts 2 --seed 9";
    const fs::path out1 = g_work / "check1";
    REQUIRE(run("check" + common + " --observed 16,20,20,20 --out " + out1.string()) == 0);

    const nlohmann::json check = nlohmann::json::parse(slurp(out1 / "check.json"));
    for (const char* key :
         {"g_obs", "p_value", "g_replicates", "joint_fit_summary", "z_obs_mahalanobis"}) {
        CHECK(check.contains(key));
    }
    const double p = check["p_value"].get<double>();
    CHECK(p < 0.05);  // counts generated far in the prior tail
    CHECK(p * 100.0 == doctest::Approx(std::round(p * 100.0)).epsilon(1e-9));

    const conflictlab::CsvTable reps = conflictlab::read_csv((out1 / "g_replicates.csv").string());
    CHECK(reps.header[0] == "g_tilde");
    CHECK(reps.values.rows() == 100);

    const fs::path out2 = g_work / "check2";
    REQUIRE(run("check" + common + " --observed 16,20,20,20 --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "check.json") == slurp(out2 / "check.json"));
    CHECK(slurp(out1 / "g_replicates.csv") == slurp(out2 / "g_replicates.csv"));
}

TEST_CASE("check: external model consumes simulated draw files") {
    const fs::path sim = g_work / "ext_sim";
    REQUIRE(run("simulate --model logistic --n 2200 --seed 21 --out " + sim.string()) == 0);
    const fs::path out = g_work / "ext_check";
    const int code = run("check --model external --train-theta " + (sim / "theta.csv").string() +
                         " --train-summaries " + (sim / "summaries.csv").string() +
                         " --n-train 2000 --replicates 150 --max-components 3 --restarts 2" +
                         " --observed 10,11,9,12 --seed 3 --out " + out.string());
    REQUIRE(code == 0);
    const nlohmann::json check = nlohmann::json::parse(slurp(out / "check.json"));
    const double p = check["p_value"].get<double>();
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);

    // asking for more rows than the files hold is a usage error
    CHECK(run("check --model external --train-theta " + (sim / "theta.csv").string() +
              " --train-summaries " + (sim / "summaries.csv").string() +
              " --n-train 2200 --replicates 100 --observed 1,2,3,4 --out " + out.string()) == 1);
}

TEST_CASE("fit: selection report and serialization fidelity") {
    // single-cluster data
    conflictlab::CsvTable data;
    data.header = {"x", "y"};
    data.values.resize(1500, 2);
    conflictlab::Rng rng(33);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 1500; ++i) {
        data.values(i, 0) = gauss(rng) * 1.5 + 2.0;
        data.values(i, 1) = gauss(rng);
    }
    const fs::path csv = g_work / "cluster.csv";
    conflictlab::write_csv(csv.string(), data);

    const fs::path out = g_work / "fit1";
    REQUIRE(run("fit --data " + csv.string() +
                " --max-components 3 --restarts 2 --seed 17 --out " + out.string()) == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(out / "fit_report.json"));
    CHECK(report["selected"]["k"].get<int>() == 1);
    CHECK(report["candidates"].size() == 6);  // 3 k values x 2 structures

    // serialization fidelity: reload -> re-dump -> reload, densities agree
    const nlohmann::json mix_json = nlohmann::json::parse(slurp(out / "mixture.json"));
    const conflictlab::GaussianMixture a = conflictlab::mixture_from_json(mix_json);
    const conflictlab::GaussianMixture b =
        conflictlab::mixture_from_json(nlohmann::json::parse(conflictlab::mixture_to_json(a).dump()));
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x(2);
        x << gauss(rng) * 3.0, gauss(rng) * 3.0;
        CHECK(b.log_density(x) == doctest::Approx(a.log_density(x)).epsilon(1e-12));
    }
}

TEST_CASE("fit: malformed CSV row names the line and exits with usage code") {
    const fs::path bad = g_work / "bad.csv";
    std::ofstream f(bad);
    f << "x,y\n1,2\n3,banana\n";
    f.close();
    const fs::path out = g_work / "fit_bad";
    CHECK(run("fit --data " + bad.string() + " --out " + out.string()) == 1);
    CHECK(slurp(g_work / "stderr.txt").find("line 3") != std::string::npos);
}

TEST_CASE("fit: forced singular covariance is a numerical failure (exit 2)") {
    conflictlab::CsvTable constant;
    constant.header = {"x"};
    constant.values = Eigen::MatrixXd::Ones(300, 1);
    const fs::path csv = g_work / "constant.csv";
    conflictlab::write_csv(csv.string(), constant);
    const fs::path out = g_work / "fit_constant";
    CHECK(run("fit --data " + csv.string() + " --ridge 0 --max-components 1 --out " +
              out.string()) == 2);
}

TEST_CASE("wi: grid search outputs surface files deterministically") {
    const std::string common =
        " --model logistic --n-train 1200 --replicates 60 --base-draws 60 --max-components 2"
        " --restarts 1 --grid 3x3 --seed 13";
    const fs::path out1 = g_work / "wi1";
    REQUIRE(run("wi" + common + " --out " + out1.string()) == 0);

    const conflictlab::CsvTable surface = conflictlab::read_csv((out1 / "wi_surface.csv").string());
    CHECK(surface.values.rows() == 9);
    CHECK(surface.values.cols() == 3);
    CHECK(surface.header == std::vector<std::string>{"gamma_1", "gamma_2", "w_alpha"});
    CHECK(fs::exists(out1 / "wi_surface.svg"));
    const std::string svg = slurp(out1 / "wi_surface.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("gamma_2") != std::string::npos);

    const nlohmann::json report = nlohmann::json::parse(slurp(out1 / "wi_report.json"));
    for (const char* key : {"gamma_points", "w_alpha", "x_alpha", "best_gamma", "satisfying_points"}) {
        CHECK(report.contains(key));
    }

    const fs::path out2 = g_work / "wi2";
    REQUIRE(run("wi" + common + " --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "wi_surface.csv") == slurp(out2 / "wi_surface.csv"));
    CHECK(slurp(out1 / "wi_report.json") == slurp(out2 / "wi_report.json"));
}

TEST_CASE("wi: 1D models emit a line plot") {
    const fs::path out = g_work / "wi_bb";
    REQUIRE(run("wi --model boombust --n-train 1500 --replicates 50 --base-draws 50"
                " --max-components 2 --restarts 1 --grid '[3,5,7]' --seed 19 --out " +
                out.string()) == 0);
    const conflictlab::CsvTable surface = conflictlab::read_csv((out / "wi_surface.csv").string());
    CHECK(surface.values.rows() == 3);
    CHECK(surface.values.cols() == 2);
    const std::string svg = slurp(out / "wi_surface.svg");
    CHECK(svg.find("<path") != std::string::npos);
}

TEST_CASE("config file feeds options with flag overrides winning") {
    const fs::path cfg = g_work / "run.ini";
    std::ofstream f(cfg);
    f << "[simulate]\nmodel=logistic\nn=4\nseed=23\nout=" << (g_work / "cfg_out").string() << "\n";
    f.close();
    REQUIRE(run("simulate --config " + cfg.string()) == 0);
    const conflictlab::CsvTable a = conflictlab::read_csv((g_work / "cfg_out" / "theta.csv").string());
    CHECK(a.values.rows() == 4);

    REQUIRE(run("simulate --config " + cfg.string() + " --n 6") == 0);
    const conflictlab::CsvTable b = conflictlab::read_csv((g_work / "cfg_out" / "theta.csv").string());
    CHECK(b.values.rows() == 6);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("check --model nope --observed 1 --out " + (g_work / "x").string()) == 1);
    CHECK(run("simulate --model logistic --n 3 --gamma 1 --out " + (g_work / "x").string()) == 1);
    CHECK(run("check --model logistic --observed 1,2,3 --out " + (g_work / "x").string()) == 1);
    CHECK(run("frobnicate") == 1);
}

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (!arg.empty() && arg[0] != '-') {
            g_binary = arg;
            break;
        }
    }
    if (g_binary.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-conflictlab-binary>\n");
        return 1;
    }
    g_work = fs::temp_directory_path() / "conflictlab_cli_test";
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    const int rc = ctx.run();
    return rc;
}
