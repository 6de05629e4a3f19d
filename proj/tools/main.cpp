#include <CLI11.hpp>
#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "conflictlab/conflict.hpp"
#include "conflictlab/csv.hpp"
#include "conflictlab/errors.hpp"
#include "conflictlab/models/registry.hpp"
#include "conflictlab/serialization.hpp"
#include "conflictlab/svg.hpp"
#include "conflictlab/weakinfo.hpp"

namespace fs = std::filesystem;
using namespace conflictlab;

namespace {

struct CommonOptions {
    std::string model;
    std::string out = ".";
    std::uint64_t seed = 0;
    int workers = 0;
};

struct FitOptions {
    int max_components = 15;
    int restarts = 5;
    double em_tolerance = 1e-6;
    int max_iterations = 500;
    double ridge = -1.0;  // < 0 keeps the data-driven default
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_model) {
    if (with_model) {
        cmd->add_option("--model", opts.model, "Model: logistic, gk_mv, boombust or external")
            ->required();
    }
    cmd->add_option("--out", opts.out, "Output directory (created if missing)");
    cmd->add_option("--seed", opts.seed, "Random seed; identical seeds give identical outputs");
    cmd->add_option("--workers", opts.workers, "Worker threads (0 = available parallelism)")
        ->envname("CONFLICTLAB_WORKERS");
}

void add_fit_options(CLI::App* cmd, FitOptions& opts) {
    cmd->add_option("--max-components", opts.max_components, "Upper bound of the BIC sweep");
    cmd->add_option("--restarts", opts.restarts, "Independent EM restarts per candidate");
    cmd->add_option("--em-tolerance", opts.em_tolerance, "Relative log-likelihood change at convergence");
    cmd->add_option("--max-iterations", opts.max_iterations, "EM iteration cap");
    cmd->add_option("--ridge", opts.ridge, "Covariance diagonal ridge (negative = data-driven default)");
}

FitConfig to_fit_config(const FitOptions& opts, std::uint64_t seed, int workers) {
    FitConfig cfg;
    cfg.max_components = opts.max_components;
    cfg.restarts = opts.restarts;
    cfg.em_tolerance = opts.em_tolerance;
    cfg.max_iterations = opts.max_iterations;
    if (opts.ridge >= 0.0) cfg.ridge = opts.ridge;
    cfg.seed = seed;
    cfg.workers = workers;
    return cfg;
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir)) {
        throw std::invalid_argument("cannot create output directory: " + out + " (" + ec.message() + ")");
    }
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    CommonOptions common;
    int n = 1000;
    std::vector<double> gamma;
};

int cmd_simulate(const SimulateOptions& opts) {
    const models::ModelBundle bundle = models::make_model(opts.common.model);
    const Eigen::VectorXd gamma =
        opts.gamma.empty() ? bundle.model->gamma0() : to_vector(opts.gamma);
    if (gamma.size() != bundle.model->gamma_dim()) {
        throw std::invalid_argument("--gamma needs " + std::to_string(bundle.model->gamma_dim()) +
                                    " entries for model " + opts.common.model);
    }

    Eigen::MatrixXd theta(opts.n, static_cast<Eigen::Index>(bundle.theta_names.size()));
    Eigen::MatrixXd summaries(opts.n, static_cast<Eigen::Index>(bundle.summary_names.size()));
    for (int i = 0; i < opts.n; ++i) {
        Rng rng = make_rng(opts.common.seed, {tag(SeedPhase::Simulate), static_cast<std::uint64_t>(i)});
        const auto [t, z] = bundle.draw_full(gamma, rng);
        theta.row(i) = t.transpose();
        summaries.row(i) = z.transpose();
    }

    const fs::path dir = prepare_out_dir(opts.common.out);
    write_csv((dir / "theta.csv").string(), CsvTable{bundle.theta_names, theta});
    write_csv((dir / "summaries.csv").string(), CsvTable{bundle.summary_names, summaries});
    std::cout << "theta.csv: " << opts.n << " rows\nsummaries.csv: " << opts.n << " rows\n";
    return 0;
}

// ---------------------------------------------------------------------------
// check

struct CheckOptions {
    CommonOptions common;
    FitOptions fit;
    int n_train = 100000;
    int replicates = 1000;
    std::vector<double> observed;
    std::string observed_csv;
    std::string train_theta;
    std::string train_summaries;
    std::string prior_json;
};

Eigen::VectorXd load_observed(const CheckOptions& opts, int expected_dim) {
    Eigen::VectorXd z;
    if (!opts.observed.empty()) {
        z = to_vector(opts.observed);
    } else if (!opts.observed_csv.empty()) {
        const CsvTable t = read_csv(opts.observed_csv);
        if (t.values.rows() < 1) throw std::invalid_argument("observed CSV has no data rows");
        z = t.values.row(0).transpose();
    } else {
        throw std::invalid_argument("provide the observed summary via --observed or --observed-csv");
    }
    if (expected_dim > 0 && z.size() != expected_dim) {
        throw std::invalid_argument("observed summary has " + std::to_string(z.size()) +
                                    " entries, expected " + std::to_string(expected_dim));
    }
    return z;
}

int cmd_check(const CheckOptions& opts) {
    CheckConfig cfg;
    cfg.n_train = opts.n_train;
    cfg.replicates = opts.replicates;
    cfg.seed = opts.common.seed;
    cfg.workers = opts.common.workers;
    cfg.fit = to_fit_config(opts.fit, opts.common.seed, opts.common.workers);

    ConflictCheckResult result;
    if (opts.common.model == "external") {
        if (opts.train_theta.empty() || opts.train_summaries.empty()) {
            throw std::invalid_argument(
                "model external needs --train-theta and --train-summaries CSV files");
        }
        const CsvTable theta = read_csv(opts.train_theta);
        const CsvTable summaries = read_csv(opts.train_summaries);
        if (theta.values.rows() != summaries.values.rows()) {
            throw std::invalid_argument("--train-theta and --train-summaries row counts differ");
        }
        const Eigen::Index rows = theta.values.rows();
        if (static_cast<Eigen::Index>(cfg.n_train) + cfg.replicates > rows) {
            throw std::invalid_argument(
                "external draws exhausted: n_train + replicates = " +
                std::to_string(cfg.n_train + cfg.replicates) + " exceeds the " +
                std::to_string(rows) + " file rows; lower --n-train/--replicates");
        }
        Eigen::MatrixXd train(cfg.n_train, theta.values.cols() + summaries.values.cols());
        train << theta.values.topRows(cfg.n_train), summaries.values.topRows(cfg.n_train);
        const Eigen::MatrixXd replicate_z = summaries.values.middleRows(cfg.n_train, cfg.replicates);

        std::optional<GaussianMixture> prior;
        if (!opts.prior_json.empty()) {
            std::ifstream f(opts.prior_json);
            if (!f) throw std::runtime_error("cannot open: " + opts.prior_json);
            prior = mixture_from_json(nlohmann::json::parse(f));
        }
        const Eigen::VectorXd z_obs = load_observed(opts, static_cast<int>(summaries.values.cols()));
        const ConflictCheck check(train, static_cast<int>(theta.values.cols()), replicate_z,
                                  std::move(prior), cfg);
        result = check.evaluate(z_obs);
    } else {
        const models::ModelBundle bundle = models::make_model(opts.common.model);
        const Eigen::VectorXd z_obs = load_observed(opts, bundle.model->summary_dim());
        result = run_check(*bundle.model, z_obs, cfg);
    }

    const fs::path dir = prepare_out_dir(opts.common.out);
    write_json(dir / "check.json", check_result_to_json(result));
    CsvTable reps;
    reps.header = {"g_tilde"};
    reps.values.resize(static_cast<Eigen::Index>(result.g_replicates.size()), 1);
    for (std::size_t i = 0; i < result.g_replicates.size(); ++i) {
        reps.values(static_cast<Eigen::Index>(i), 0) = result.g_replicates[i];
    }
    write_csv((dir / "g_replicates.csv").string(), reps);
    std::cout << "p_KL = " << result.p_value << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// wi

struct WiOptions {
    CommonOptions common;
    FitOptions fit;
    double alpha = 0.05;
    double delta = 0.5;
    int n_train = 100000;
    int replicates = 1000;
    int base_draws = 500;
    int design_size = 100;
    int lhs_iterations = 1000;
    std::string grid;
    std::vector<double> gamma0;
};

// Grid spec: per-dimension tokens joined by 'x'; each token is either a count
// (linspace over the region) or an explicit bracket list. Examples: "50x100",
// "[0.2,1,3,5,7,9]", "10x[1,2,5]".
std::vector<std::vector<double>> parse_grid_axes(const std::string& spec, const Rectangle& region) {
    std::vector<std::string> tokens;
    std::string cur;
    int depth = 0;
    for (char c : spec) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if ((c == 'x' || c == 'X') && depth == 0) {
            tokens.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    tokens.push_back(cur);
    if (static_cast<int>(tokens.size()) != region.dim()) {
        throw std::invalid_argument("--grid has " + std::to_string(tokens.size()) +
                                    " axes but gamma has dimension " + std::to_string(region.dim()));
    }
    std::vector<std::vector<double>> axes;
    for (std::size_t d = 0; d < tokens.size(); ++d) {
        std::string t = tokens[d];
        std::vector<double> axis;
        if (!t.empty() && t.front() == '[') {
            if (t.back() != ']') throw std::invalid_argument("--grid: unterminated bracket list");
            std::istringstream in(t.substr(1, t.size() - 2));
            std::string item;
            while (std::getline(in, item, ',')) {
                if (!item.empty()) axis.push_back(std::stod(item));
            }
        } else {
            const int count = std::stoi(t);
            if (count < 1) throw std::invalid_argument("--grid: counts must be >= 1");
            const double lo = region.lower[static_cast<Eigen::Index>(d)];
            const double hi = region.upper[static_cast<Eigen::Index>(d)];
            for (int i = 0; i < count; ++i) {
                axis.push_back(count == 1 ? (lo + hi) / 2.0
                                          : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
            }
        }
        if (axis.empty()) throw std::invalid_argument("--grid: empty axis");
        axes.push_back(std::move(axis));
    }
    return axes;
}

Eigen::MatrixXd cartesian_product(const std::vector<std::vector<double>>& axes) {
    Eigen::Index rows = 1;
    for (const auto& a : axes) rows *= static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd points(rows, static_cast<Eigen::Index>(axes.size()));
    for (Eigen::Index r = 0; r < rows; ++r) {
        Eigen::Index rest = r;
        for (std::size_t d = axes.size(); d-- > 0;) {
            const auto size = static_cast<Eigen::Index>(axes[d].size());
            points(r, static_cast<Eigen::Index>(d)) = axes[d][static_cast<std::size_t>(rest % size)];
            rest /= size;
        }
    }
    return points;
}

int cmd_wi(const WiOptions& opts) {
    const models::ModelBundle bundle = models::make_model(opts.common.model);
    WeakInformativityConfig cfg;
    cfg.alpha = opts.alpha;
    cfg.delta = opts.delta;
    cfg.n_train = opts.n_train;
    cfg.replicates = opts.replicates;
    cfg.base_draws = opts.base_draws;
    cfg.design_size = opts.design_size;
    cfg.lhs_iterations = opts.lhs_iterations;
    cfg.seed = opts.common.seed;
    cfg.workers = opts.common.workers;
    cfg.fit = to_fit_config(opts.fit, opts.common.seed, opts.common.workers);
    if (!opts.gamma0.empty()) cfg.gamma0 = to_vector(opts.gamma0);

    const Rectangle region = bundle.model->gamma_region();
    std::vector<std::vector<double>> axes;
    const WeakInfoSession session(*bundle.model, cfg);
    WeakInformativityReport report;
    if (!opts.grid.empty()) {
        axes = parse_grid_axes(opts.grid, region);
        report = session.search(cartesian_product(axes));
    } else {
        report = session.search();
    }

    const fs::path dir = prepare_out_dir(opts.common.out);
    write_json(dir / "wi_report.json", wi_report_to_json(report));

    const int dim = static_cast<int>(report.gamma_points.cols());
    CsvTable surface;
    for (int d = 1; d <= dim; ++d) surface.header.push_back("gamma_" + std::to_string(d));
    surface.header.emplace_back("w_alpha");
    surface.values.resize(report.gamma_points.rows(), dim + 1);
    surface.values.leftCols(dim) = report.gamma_points;
    for (Eigen::Index i = 0; i < report.gamma_points.rows(); ++i) {
        surface.values(i, dim) = report.w_alpha[static_cast<std::size_t>(i)];
    }
    write_csv((dir / "wi_surface.csv").string(), surface);

    if (dim == 1) {
        Eigen::VectorXd w(report.gamma_points.rows());
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = report.w_alpha[static_cast<std::size_t>(i)];
        write_text(dir / "wi_surface.svg",
                   svg_line_plot(report.gamma_points.col(0), w, "gamma_1"));
    } else if (dim == 2 && !axes.empty()) {
        const auto nx = static_cast<Eigen::Index>(axes[0].size());
        const auto ny = static_cast<Eigen::Index>(axes[1].size());
        Eigen::MatrixXd grid_vals(nx, ny);
        for (Eigen::Index i = 0; i < nx; ++i) {
            for (Eigen::Index j = 0; j < ny; ++j) {
                grid_vals(i, j) = report.w_alpha[static_cast<std::size_t>(i * ny + j)];
            }
        }
        Eigen::VectorXd xs(nx), ys(ny);
        for (Eigen::Index i = 0; i < nx; ++i) xs[i] = axes[0][static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < ny; ++j) ys[j] = axes[1][static_cast<std::size_t>(j)];
        write_text(dir / "wi_surface.svg", svg_heatmap(xs, ys, grid_vals, "gamma_1", "gamma_2"));
    } else if (dim == 2) {
        Eigen::VectorXd w(report.gamma_points.rows());
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = report.w_alpha[static_cast<std::size_t>(i)];
        write_text(dir / "wi_surface.svg",
                   svg_scatter(report.gamma_points, w, "gamma_1", "gamma_2"));
    }

    std::cout << "best_gamma =";
    for (Eigen::Index i = 0; i < report.best_gamma.size(); ++i) std::cout << ' ' << report.best_gamma[i];
    std::cout << "\nsatisfying_points = " << report.satisfying_points.rows() << " of "
              << report.gamma_points.rows() << " (delta = " << report.delta << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitCmdOptions {
    CommonOptions common;
    FitOptions fit;
    std::string data;
};

int cmd_fit(const FitCmdOptions& opts) {
    const CsvTable table = read_csv(opts.data);
    const FitConfig cfg = to_fit_config(opts.fit, opts.common.seed, opts.common.workers);
    const SelectResult sel = select_bic(table.values, cfg);

    const fs::path dir = prepare_out_dir(opts.common.out);
    write_json(dir / "mixture.json", mixture_to_json(sel.mixture()));
    write_json(dir / "fit_report.json", select_result_to_json(sel));
    std::cout << "selected k = " << sel.k << " (" << to_string(sel.structure)
              << "), BIC = " << sel.bic << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prior-data conflict checks and weakly informative prior search "
                 "for likelihood-free inference"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file (sections per subcommand)");

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Draw (theta, summary) pairs to CSV");
    simulate->fallthrough();
    add_common(simulate, sim.common, true);
    simulate->add_option("--n", sim.n, "Number of draws")->check(CLI::PositiveNumber);
    simulate->add_option("--gamma", sim.gamma, "Expansion value (default: the model's gamma0)")
        ->delimiter(',');

    CheckOptions chk;
    CLI::App* check = app.add_subcommand("check", "Prior-data conflict check of an observed summary");
    check->fallthrough();
    add_common(check, chk.common, true);
    add_fit_options(check, chk.fit);
    check->add_option("--n-train", chk.n_train, "Training draws for the joint fit");
    check->add_option("--replicates", chk.replicates, "Prior predictive replicates R");
    check->add_option("--observed", chk.observed, "Observed summary values")->delimiter(',');
    check->add_option("--observed-csv", chk.observed_csv, "CSV whose first row is the observed summary");
    check->add_option("--train-theta", chk.train_theta, "External model: CSV of theta draws");
    check->add_option("--train-summaries", chk.train_summaries, "External model: CSV of summary draws");
    check->add_option("--prior-json", chk.prior_json, "External model: exact prior mixture JSON");

    WiOptions wi;
    CLI::App* wicmd = app.add_subcommand("wi", "Degree-of-weak-informativity search over gamma");
    wicmd->fallthrough();
    add_common(wicmd, wi.common, true);
    add_fit_options(wicmd, wi.fit);
    wicmd->add_option("--alpha", wi.alpha, "Conflict level");
    wicmd->add_option("--delta", wi.delta, "Target conflict reduction");
    wicmd->add_option("--n-train", wi.n_train, "Hierarchical training draws");
    wicmd->add_option("--replicates", wi.replicates, "Inner replicates R");
    wicmd->add_option("--base-draws", wi.base_draws, "Base prior predictive draws S");
    wicmd->add_option("--design-size", wi.design_size, "LHS design size when no --grid is given");
    wicmd->add_option("--lhs-iterations", wi.lhs_iterations, "Maximin improvement proposals");
    wicmd->add_option("--grid", wi.grid, "Grid spec, e.g. 10x10 or [0.2,1,3,5,7,9]");
    wicmd->add_option("--gamma0", wi.gamma0, "Base expansion value override")->delimiter(',');

    FitCmdOptions fit;
    CLI::App* fitcmd = app.add_subcommand("fit", "BIC-selected Gaussian mixture fit of a CSV");
    fitcmd->fallthrough();
    add_common(fitcmd, fit.common, false);
    add_fit_options(fitcmd, fit.fit);
    fitcmd->add_option("--data", fit.data, "CSV of observations")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (check->parsed()) return cmd_check(chk);
        if (wicmd->parsed()) return cmd_wi(wi);
        if (fitcmd->parsed()) return cmd_fit(fit);
        throw std::invalid_argument("no subcommand given");
    } catch (const numeric_error& e) {
        std::cerr << "conflictlab: numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const simulation_failure& e) {
        std::cerr << "conflictlab: simulation failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "conflictlab: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "conflictlab: " << e.what() << "\n";
        return 1;
    }
}
