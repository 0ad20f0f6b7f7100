// Command-line front end: classical intervals, bootstrap bandwidth
// selection, the coverage simulation studies and the two-legged-tie
// analysis. Exit codes: 0 success, 1 runtime or data failure, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "binreg/bootstrap.hpp"
#include "binreg/conditional_ci.hpp"
#include "binreg/errors.hpp"
#include "binreg/proportion_ci.hpp"
#include "binreg/simulation.hpp"
#include "binreg/uefa.hpp"

namespace {

namespace fs = std::filesystem;
using binreg::BinomialCount;
using binreg::IntervalEstimate;
using binreg::IntervalMethod;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

std::string default_output_dir() {
    if (const char* env = std::getenv("BINREG_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return ".";
}

fs::path prepare_output_dir(const std::string& dir) {
    fs::path path(dir);
    fs::create_directories(path);
    return path;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw binreg::Error("cannot open output file: " + path.string());
    out << content;
}

void print_interval(const std::string& label, const IntervalEstimate& ci) {
    std::cout << label << ": [" << std::fixed << std::setprecision(3) << ci.lower << ", "
              << ci.upper << "]" << std::setprecision(6) << std::defaultfloat;
    if (ci.truncated) std::cout << " (truncated)";
    if (ci.upper - ci.lower <= 0.0) std::cout << " (degenerate: zero width)";
    std::cout << '\n';
}

std::optional<IntervalMethod> parse_method(const std::string& token) {
    if (token == "wald") return IntervalMethod::Wald;
    if (token == "wilson") return IntervalMethod::Wilson;
    if (token == "ac") return IntervalMethod::AgrestiCoull;
    return std::nullopt;
}

int cmd_ci_prop(long successes, long trials, double alpha, const std::string& method) {
    if (trials < 1 || successes < 0 || successes > trials) {
        std::cerr << "ci-prop: need 0 <= successes <= trials and trials >= 1\n";
        return exit_usage;
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::cerr << "ci-prop: alpha must lie in (0,1)\n";
        return exit_usage;
    }
    const BinomialCount count(successes, trials);
    if (method == "all" || method == "wald") {
        print_interval("wald", binreg::wald_prop(count, alpha));
    }
    if (method == "all" || method == "wilson") {
        print_interval("wilson", binreg::wilson_prop(count, alpha));
    }
    if (method == "all" || method == "ac") {
        print_interval("ac", binreg::agresti_coull_prop(count, alpha));
    }
    return exit_ok;
}

binreg::Sample load_sample(const std::string& data_path) {
    const auto ties = binreg::load_ties(data_path);
    return binreg::ties_to_sample(ties, false);
}

int cmd_select_h(const std::string& data_path, double x, const std::string& method_token,
                 int b, double grid_min, double grid_max, int grid_steps,
                 const std::string& pilot, double alpha, std::uint64_t seed,
                 const std::string& out_dir, int threads) {
    const auto method = parse_method(method_token);
    if (!method) {
        std::cerr << "select-h: unknown method '" << method_token << "'\n";
        return exit_usage;
    }
    if (!(grid_min > 0.0) || !(grid_max > grid_min) || grid_steps < 2) {
        std::cerr << "select-h: need 0 < grid-min < grid-max and grid-steps >= 2\n";
        return exit_usage;
    }
    if (b < 1 || !(alpha > 0.0 && alpha < 1.0)) {
        std::cerr << "select-h: need b >= 1 and alpha in (0,1)\n";
        return exit_usage;
    }
    std::optional<binreg::Bandwidth> pilot_bw;
    if (pilot != "auto") {
        try {
            pilot_bw.emplace(std::stod(pilot));
        } catch (const std::exception&) {
            std::cerr << "select-h: --pilot must be 'auto' or a positive number\n";
            return exit_usage;
        }
    }

    const auto sample = load_sample(data_path);
    binreg::BootstrapConfig config;
    config.b_resamples = b;
    config.h_grid = Eigen::VectorXd::LinSpaced(grid_steps, grid_min, grid_max);
    config.alpha = alpha;
    config.seed = seed;
    config.method = *method;

    const auto curve = binreg::select_ci_bandwidth(sample, x, config, binreg::gaussian_kernel(),
                                                   pilot_bw, threads);

    const fs::path out = prepare_output_dir(out_dir);
    std::ostringstream csv;
    binreg::write_coverage_csv(csv, curve);
    write_file(out / "coverage_curve.csv", csv.str());
    write_file(out / "coverage_curve.json",
               binreg::coverage_curve_json(curve, config).dump(2) + "\n");

    std::cout << "selected h = " << curve.selected_h << " ("
              << binreg::selection_mode_token(curve.selection_mode) << ")\n";
    return exit_ok;
}

int cmd_simulate(int scenario, int n, int m, int b, const std::vector<double>& xs,
                 double alpha, std::uint64_t seed, const std::string& pilot_rule,
                 bool full_scale, const std::string& out_dir, int threads) {
    if (scenario != 1 && scenario != 2) {
        std::cerr << "simulate: scenario must be 1 or 2\n";
        return exit_usage;
    }
    if (n < 3 || m < 1 || b < 1 || !(alpha > 0.0 && alpha < 1.0)) {
        std::cerr << "simulate: need n >= 3, m >= 1, b >= 1, alpha in (0,1)\n";
        return exit_usage;
    }
    binreg::ScenarioSpec spec;
    spec.id = scenario;
    spec.n = n;
    spec.eval_points = xs.empty() ? std::vector<double>{0.0} : xs;
    spec.m_replicates = full_scale ? 1000 : m;
    spec.alpha = alpha;
    spec.bootstrap.b_resamples = full_scale ? 1000 : b;
    spec.bootstrap.alpha = alpha;
    spec.bootstrap.seed = seed;
    if (pilot_rule == "auto") {
        spec.pilot_rule = binreg::default_pilot_rule(scenario);
    } else if (pilot_rule == "fixed") {
        spec.pilot_rule = binreg::PilotRule::FixedFormula;
    } else if (pilot_rule == "aicc") {
        spec.pilot_rule = binreg::PilotRule::Aicc;
    } else {
        std::cerr << "simulate: --pilot-rule must be auto, fixed or aicc\n";
        return exit_usage;
    }

    const auto report = binreg::run_coverage_study(spec, threads);

    const fs::path out = prepare_output_dir(out_dir);
    std::ostringstream csv, samples;
    binreg::write_report_csv(csv, report);
    binreg::write_report_samples_csv(samples, report);
    write_file(out / "coverage_report.csv", csv.str());
    write_file(out / "coverage_report_samples.csv", samples.str());
    write_file(out / "coverage_report.json", binreg::report_json(report).dump(2) + "\n");

    std::cout << "scenario " << scenario << ", n = " << n << ", M = " << spec.m_replicates
              << ", B = " << spec.bootstrap.b_resamples << ", alpha = " << alpha << "\n";
    std::cout << std::left << std::setw(10) << "x" << std::setw(10) << "method" << std::setw(12)
              << "coverage" << std::setw(14) << "mean_length" << std::setw(10) << "h_median"
              << "\n";
    for (const auto& cell : report.cells) {
        std::cout << std::left << std::setw(10) << cell.x << std::setw(10)
                  << binreg::method_token(cell.method) << std::setw(12) << cell.coverage
                  << std::setw(14) << cell.mean_length << std::setw(10) << cell.h_median << "\n";
    }
    return exit_ok;
}

int cmd_analyze(const std::string& data_path, bool exclude_extra_time, double alpha, int b,
                std::uint64_t seed, const std::string& out_dir, int threads) {
    if (b < 1 || !(alpha > 0.0 && alpha < 1.0)) {
        std::cerr << "analyze: need b >= 1 and alpha in (0,1)\n";
        return exit_usage;
    }
    const auto ties = binreg::load_ties(data_path);

    binreg::AnalysisOptions options;
    options.exclude_extra_time = exclude_extra_time;
    options.alpha = alpha;
    options.bootstrap.b_resamples = b;
    options.bootstrap.alpha = alpha;
    options.bootstrap.seed = seed;

    const auto report = binreg::run_slha_analysis(ties, options, threads);

    const fs::path out = prepare_output_dir(out_dir);
    write_file(out / "analysis.json", binreg::analysis_json(report).dump(2) + "\n");
    {
        std::ostringstream text;
        binreg::write_analysis_text(text, report);
        write_file(out / "analysis.txt", text.str());
    }
    auto dump_curve = [&](const binreg::Curve& curve, const std::string& name) {
        std::ostringstream csv;
        csv.precision(12);
        csv << "x,y\n";
        for (Eigen::Index i = 0; i < curve.x.size(); ++i) {
            csv << curve.x[i] << ',' << curve.y[i] << '\n';
        }
        write_file(out / name, csv.str());
    };
    dump_curve(report.density_curve, "density_curve.csv");
    dump_curve(report.nw_curve, "nw_curve.csv");
    for (const auto& ma : report.methods) {
        std::ostringstream csv;
        binreg::write_coverage_csv(csv, ma.curve);
        write_file(out / (std::string("coverage_curve_") + binreg::method_token(ma.method) +
                          ".csv"),
                   csv.str());
    }

    binreg::write_analysis_text(std::cout, report);
    std::cout << "SLHA significant at level " << alpha << ": "
              << (report.slha_significant ? "yes" : "no") << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonparametric binary-regression intervals and two-legged-tie analysis"};
    app.require_subcommand(1);

    // ci-prop
    long successes = 0, trials = 0;
    double cp_alpha = 0.05;
    std::string cp_method = "all";
    auto* ci_prop = app.add_subcommand("ci-prop", "Classical binomial confidence intervals");
    ci_prop->add_option("--successes", successes, "Number of successes")->required();
    ci_prop->add_option("--trials", trials, "Number of trials")->required();
    ci_prop->add_option("--alpha", cp_alpha, "Significance level (default 0.05)");
    ci_prop->add_option("--method", cp_method, "all|wald|wilson|ac")
        ->check(CLI::IsMember({"all", "wald", "wilson", "ac"}));

    // select-h
    std::string sh_data, sh_method = "wilson", sh_pilot = "auto", sh_out = default_output_dir();
    double sh_x = 0.0, sh_gmin = 0.05, sh_gmax = 2.0, sh_alpha = 0.05;
    int sh_b = 1000, sh_gsteps = 200, sh_threads = 0;
    std::uint64_t sh_seed = 0;
    auto* select_h =
        app.add_subcommand("select-h", "Bootstrap bandwidth selection for an interval at x");
    select_h->add_option("--data", sh_data, "Ties CSV file")->required();
    select_h->add_option("--x", sh_x, "Evaluation point (default 0)");
    select_h->add_option("--method", sh_method, "wald|wilson|ac");
    select_h->add_option("--b", sh_b, "Bootstrap resamples (default 1000)");
    select_h->add_option("--grid-min", sh_gmin, "Smallest candidate h (default 0.05)");
    select_h->add_option("--grid-max", sh_gmax, "Largest candidate h (default 2)");
    select_h->add_option("--grid-steps", sh_gsteps, "Grid size (default 200)");
    select_h->add_option("--pilot", sh_pilot, "'auto' (corrected AIC) or a numeric bandwidth");
    select_h->add_option("--alpha", sh_alpha, "Significance level (default 0.05)");
    select_h->add_option("--seed", sh_seed, "RNG seed (default 0)");
    select_h->add_option("--out", sh_out, "Output directory");
    select_h->add_option("--threads", sh_threads, "Max worker threads (0 = all cores)");

    // simulate
    int sim_scenario = 1, sim_n = 250, sim_m = 500, sim_b = 500, sim_threads = 0;
    double sim_alpha = 0.05;
    std::vector<double> sim_xs;
    std::uint64_t sim_seed = 0;
    std::string sim_pilot_rule = "auto", sim_out = default_output_dir();
    bool sim_full = false;
    auto* simulate = app.add_subcommand("simulate", "Coverage study on a synthetic scenario");
    simulate->add_option("--scenario", sim_scenario, "1 or 2")->required();
    simulate->add_option("--n", sim_n, "Sample size per replicate");
    simulate->add_option("--m", sim_m, "Replicates (default 500)");
    simulate->add_option("--b", sim_b, "Bootstrap resamples (default 500)");
    simulate->add_option("--x", sim_xs, "Evaluation points (default 0)");
    simulate->add_option("--alpha", sim_alpha, "Significance level (default 0.05)");
    simulate->add_option("--seed", sim_seed, "RNG seed (default 0)");
    simulate->add_option("--pilot-rule", sim_pilot_rule, "auto|fixed|aicc");
    simulate->add_flag("--full", sim_full, "Run at M = B = 1000");
    simulate->add_option("--out", sim_out, "Output directory");
    simulate->add_option("--threads", sim_threads, "Max worker threads (0 = all cores)");

    // analyze
    std::string an_data, an_out = default_output_dir();
    double an_alpha = 0.05;
    int an_b = 5000, an_threads = 0;
    std::uint64_t an_seed = 0;
    bool an_exclude_et = false;
    auto* analyze = app.add_subcommand("analyze", "Second-leg home advantage analysis");
    analyze->add_option("--data", an_data, "Ties CSV file")->required();
    analyze->add_flag("--exclude-extra-time", an_exclude_et, "Drop ties decided in extra time");
    analyze->add_option("--alpha", an_alpha, "Significance level (default 0.05)");
    analyze->add_option("--b", an_b, "Bootstrap resamples (default 5000)");
    analyze->add_option("--seed", an_seed, "RNG seed (default 0)");
    analyze->add_option("--out", an_out, "Output directory");
    analyze->add_option("--threads", an_threads, "Max worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (ci_prop->parsed()) return cmd_ci_prop(successes, trials, cp_alpha, cp_method);
        if (select_h->parsed()) {
            return cmd_select_h(sh_data, sh_x, sh_method, sh_b, sh_gmin, sh_gmax, sh_gsteps,
                                sh_pilot, sh_alpha, sh_seed, sh_out, sh_threads);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_scenario, sim_n, sim_m, sim_b, sim_xs, sim_alpha, sim_seed,
                                sim_pilot_rule, sim_full, sim_out, sim_threads);
        }
        if (analyze->parsed()) {
            return cmd_analyze(an_data, an_exclude_et, an_alpha, an_b, an_seed, an_out,
                               an_threads);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}
