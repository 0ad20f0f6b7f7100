#include "binreg/uefa.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "binreg/errors.hpp"
#include "binreg/proportion_ci.hpp"

namespace binreg {

namespace {

const std::array<std::string, 9> csv_columns{"season", "competition", "round",
                                             "flht",   "slht",        "c1",
                                             "c2",     "slht_qualified", "extra_time"};

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_coefficient(const std::string& text, int row, const std::string& column) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        throw ParseError(row, column, "not a number: '" + text + "'");
    }
    if (consumed != text.size()) throw ParseError(row, column, "trailing characters: '" + text + "'");
    if (!std::isfinite(value) || value < 0.0) {
        throw ParseError(row, column, "coefficient must be a nonnegative number");
    }
    return value;
}

bool parse_bool01(const std::string& text, int row, const std::string& column) {
    if (text == "0") return false;
    if (text == "1") return true;
    throw ParseError(row, column, "expected 0 or 1, got '" + text + "'");
}

double logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double binary_log_likelihood(const Eigen::VectorXd& ys, const Eigen::VectorXd& p) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < ys.size(); ++i) {
        ll += ys[i] > 0.5 ? std::log(p[i]) : std::log(1.0 - p[i]);
    }
    return ll;
}

Curve evaluate_density_curve(const Sample& sample, Bandwidth h, const KernelSpec& kernel,
                             const Eigen::VectorXd& grid) {
    Eigen::VectorXd y(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) y[i] = kde_at(sample, grid[i], h, kernel);
    return {grid, std::move(y)};
}

Curve evaluate_nw_curve(const Sample& sample, Bandwidth h, const KernelSpec& kernel,
                        const Eigen::VectorXd& grid) {
    Eigen::VectorXd y(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        try {
            y[i] = nw_at(sample, grid[i], h, kernel);
        } catch (const NoLocalData&) {
            y[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return {grid, std::move(y)};
}

}  // namespace

std::vector<TieRecord> load_ties(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open data file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        const auto header = split_csv_row(line);
        if (header.size() != csv_columns.size() ||
            !std::equal(header.begin(), header.end(), csv_columns.begin())) {
            throw SchemaError(
                "bad header; expected "
                "'season,competition,round,flht,slht,c1,c2,slht_qualified,extra_time'");
        }
    }

    std::vector<TieRecord> ties;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != csv_columns.size()) {
            throw ParseError(row, "-", "expected 9 fields, got " + std::to_string(fields.size()));
        }
        TieRecord tie;
        tie.season = fields[0];
        if (fields[1] == "ChampionsLeague") {
            tie.competition = Competition::ChampionsLeague;
        } else if (fields[1] == "EuropaLeague") {
            tie.competition = Competition::EuropaLeague;
        } else {
            throw ParseError(row, "competition",
                             "expected ChampionsLeague or EuropaLeague, got '" + fields[1] + "'");
        }
        tie.round = fields[2];
        tie.flht = fields[3];
        tie.slht = fields[4];
        tie.c1 = parse_coefficient(fields[5], row, "c1");
        tie.c2 = parse_coefficient(fields[6], row, "c2");
        tie.slht_qualified = parse_bool01(fields[7], row, "slht_qualified");
        tie.extra_time = parse_bool01(fields[8], row, "extra_time");
        ties.push_back(std::move(tie));
    }
    return ties;
}

double build_predictor(const TieRecord& tie, double min_coefficient) {
    const double c1 = std::max(tie.c1, min_coefficient);
    const double c2 = std::max(tie.c2, min_coefficient);
    // log(c2) - log(c1) rather than log(c2/c1): swapping the teams then
    // negates the predictor exactly.
    return std::log(c2) - std::log(c1);
}

Sample ties_to_sample(const std::vector<TieRecord>& ties, bool exclude_extra_time) {
    std::vector<double> xs, ys;
    xs.reserve(ties.size());
    ys.reserve(ties.size());
    for (const auto& tie : ties) {
        if (exclude_extra_time && tie.extra_time) continue;
        xs.push_back(build_predictor(tie));
        ys.push_back(tie.slht_qualified ? 1.0 : 0.0);
    }
    return Sample(Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                  Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size())));
}

LogisticFit fit_logistic(const Sample& sample) {
    const Eigen::Index n = sample.size();
    if (n < 3) throw std::invalid_argument("fit_logistic: need n >= 3");
    const double y_bar = sample.ys().mean();
    if (y_bar <= 0.0 || y_bar >= 1.0) {
        throw DegenerateResponses("fit_logistic: all responses identical");
    }

    const Eigen::VectorXd& xs = sample.xs();
    const Eigen::VectorXd& ys = sample.ys();

    constexpr int max_iterations = 100;
    constexpr double score_tol = 1e-8;
    constexpr double loglik_tol = 1e-10;
    constexpr double separation_beta = 50.0;

    Eigen::Vector2d coef(std::log(y_bar / (1.0 - y_bar)), 0.0);
    Eigen::VectorXd p(n);
    Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
    double previous_ll = -std::numeric_limits<double>::infinity();

    LogisticFit fit;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) p[i] = logistic(coef[0] + coef[1] * xs[i]);

        const Eigen::VectorXd residual = ys - p;
        Eigen::Vector2d score(residual.sum(), xs.dot(residual));
        const Eigen::ArrayXd w = p.array() * (1.0 - p.array());
        info(0, 0) = w.sum();
        info(0, 1) = info(1, 0) = (w * xs.array()).sum();
        info(1, 1) = (w * xs.array().square()).sum();

        const double ll = binary_log_likelihood(ys, p);
        fit.iterations = iter;
        const bool score_small = score.cwiseAbs().maxCoeff() < score_tol;
        const bool ll_settled =
            std::isfinite(previous_ll) &&
            std::abs(ll - previous_ll) < loglik_tol * (std::abs(ll) + loglik_tol);
        if (score_small || ll_settled) {
            fit.converged = true;
            break;
        }
        previous_ll = ll;

        coef += info.ldlt().solve(score);
        if (std::abs(coef[1]) > separation_beta) {
            throw SeparationError("fit_logistic: slope diverged, responses look separated");
        }
    }

    fit.alpha_hat = coef[0];
    fit.beta_hat = coef[1];
    if (fit.converged) fit.covariance = info.inverse();
    for (Eigen::Index i = 0; i < n; ++i) p[i] = logistic(coef[0] + coef[1] * xs[i]);
    fit.deviance = -2.0 * binary_log_likelihood(ys, p);
    return fit;
}

IntervalEstimate logistic_p0_interval(const LogisticFit& fit, double alpha) {
    check_alpha(alpha);
    if (!fit.converged) throw NotConverged("logistic_p0_interval: fit did not converge");
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    const double se = std::sqrt(std::max(fit.covariance(0, 0), 0.0));
    const double lo = fit.alpha_hat - z * se;
    const double hi = fit.alpha_hat + z * se;
    // The logistic map is increasing, so endpoint order is preserved and the
    // result already lies inside (0,1).
    return detail::finalize({logistic(lo), logistic(hi), logistic(fit.alpha_hat)},
                            IntervalMethod::Wald, IntervalScope::Classical, 1.0 - alpha);
}

GofResult deviance_gof(const LogisticFit& fit, const Sample& sample) {
    if (!fit.converged) throw NotConverged("deviance_gof: fit did not converge");

    struct Group {
        double x_sum = 0.0;
        long count = 0;
        long successes = 0;
    };
    std::map<long long, Group> groups;
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
        const auto key = static_cast<long long>(std::llround(sample.xs()[i] * 1000.0));
        auto& g = groups[key];
        g.x_sum += sample.xs()[i];
        g.count += 1;
        g.successes += sample.ys()[i] > 0.5 ? 1 : 0;
    }
    const auto n_groups = static_cast<long>(groups.size());
    if (n_groups <= 2) throw TooFewGroups("deviance_gof: need more than 2 covariate groups");

    double statistic = 0.0;
    for (const auto& [key, g] : groups) {
        const double x = g.x_sum / static_cast<double>(g.count);
        const double p = logistic(fit.alpha_hat + fit.beta_hat * x);
        const auto m = static_cast<double>(g.count);
        const auto s = static_cast<double>(g.successes);
        if (s > 0.0) statistic += 2.0 * s * std::log(s / (m * p));
        if (s < m) statistic += 2.0 * (m - s) * std::log((m - s) / (m * (1.0 - p)));
    }
    GofResult result;
    result.statistic = statistic;
    result.dof = static_cast<int>(n_groups - 2);
    result.p_value = chi_squared_upper_tail(statistic, static_cast<double>(result.dof));
    return result;
}

AnalysisReport run_slha_analysis(const std::vector<TieRecord>& ties,
                                 const AnalysisOptions& options, int max_threads) {
    if (ties.size() < 10) throw Error("run_slha_analysis: need at least 10 ties");
    check_alpha(options.alpha);

    const KernelSpec kernel = gaussian_kernel();
    const Sample sample = ties_to_sample(ties, options.exclude_extra_time);

    AnalysisReport report;
    report.n_used = sample.size();
    report.n_excluded = static_cast<long>(ties.size()) - sample.size();
    report.alpha = options.alpha;

    const Bandwidth h0 = select_h0_aicc(sample, kernel, default_pilot_grid(sample));
    report.h0 = h0.value;
    report.p0_hat = nw_at(sample, 0.0, h0, kernel);

    const std::vector<IntervalMethod> methods{IntervalMethod::Wald, IntervalMethod::Wilson,
                                              IntervalMethod::AgrestiCoull};
    BootstrapConfig cfg = options.bootstrap;
    cfg.alpha = options.alpha;
    // one shared set of resamples scores all three interval types
    const auto curves =
        estimate_coverage_curves(sample, 0.0, h0, cfg, kernel, methods, max_threads);
    for (std::size_t m = 0; m < methods.size(); ++m) {
        MethodAnalysis ma;
        ma.method = methods[m];
        ma.curve = curves[m];
        const auto pt = conditional_point(sample, 0.0, Bandwidth(ma.curve.selected_h), kernel);
        ma.interval_at_zero = conditional_interval(methods[m], pt, options.alpha);
        if (methods[m] == IntervalMethod::Wilson) {
            report.slha_significant = ma.interval_at_zero.lower > 0.5;
        }
        report.methods.push_back(std::move(ma));
    }

    const double x_min = sample.xs().minCoeff();
    const double x_max = sample.xs().maxCoeff();
    const Eigen::VectorXd plot_grid = Eigen::VectorXd::LinSpaced(200, x_min, x_max);
    const Bandwidth density_h = select_density_bandwidth(sample);
    report.density_bandwidth = density_h.value;
    report.density_curve = evaluate_density_curve(sample, density_h, kernel, plot_grid);
    report.nw_curve = evaluate_nw_curve(sample, h0, kernel, plot_grid);

    report.positive_x = (sample.xs().array() > 0.0).count();
    report.positive_x_wilson =
        wilson_prop(BinomialCount(report.positive_x, sample.size()), options.alpha);

    report.logistic = fit_logistic(sample);
    report.logistic_p0 = logistic_p0_interval(report.logistic, options.alpha);
    report.gof = deviance_gof(report.logistic, sample);
    return report;
}

namespace {

nlohmann::json interval_json(const IntervalEstimate& ci) {
    return {{"lower", ci.lower},           {"upper", ci.upper},   {"center", ci.center},
            {"method", method_token(ci.method)}, {"level", ci.level}, {"truncated", ci.truncated}};
}

nlohmann::json curve_json(const Curve& curve) {
    return {{"x", std::vector<double>(curve.x.begin(), curve.x.end())},
            {"y", std::vector<double>(curve.y.begin(), curve.y.end())}};
}

}  // namespace

nlohmann::json analysis_json(const AnalysisReport& report) {
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& ma : report.methods) {
        methods.push_back({{"method", method_token(ma.method)},
                           {"selected_h", ma.curve.selected_h},
                           {"selection_mode", selection_mode_token(ma.curve.selection_mode)},
                           {"interval_at_zero", interval_json(ma.interval_at_zero)}});
    }
    return nlohmann::json{
        {"n_used", report.n_used},
        {"n_excluded", report.n_excluded},
        {"alpha", report.alpha},
        {"h0", report.h0},
        {"p0_hat", report.p0_hat},
        {"methods", std::move(methods)},
        {"density_bandwidth", report.density_bandwidth},
        {"density_curve", curve_json(report.density_curve)},
        {"nw_curve", curve_json(report.nw_curve)},
        {"positive_x", report.positive_x},
        {"positive_x_wilson", interval_json(report.positive_x_wilson)},
        {"logistic",
         {{"alpha_hat", report.logistic.alpha_hat},
          {"beta_hat", report.logistic.beta_hat},
          {"converged", report.logistic.converged},
          {"iterations", report.logistic.iterations},
          {"deviance", report.logistic.deviance},
          {"se_alpha", std::sqrt(std::max(report.logistic.covariance(0, 0), 0.0))},
          {"se_beta", std::sqrt(std::max(report.logistic.covariance(1, 1), 0.0))}}},
        {"logistic_p0", interval_json(report.logistic_p0)},
        {"gof",
         {{"statistic", report.gof.statistic},
          {"dof", report.gof.dof},
          {"p_value", report.gof.p_value}}},
        {"slha_significant", report.slha_significant}};
}

void write_analysis_text(std::ostream& out, const AnalysisReport& report) {
    out << "ties used:            " << report.n_used << " (" << report.n_excluded
        << " excluded)\n";
    out << "pilot bandwidth h0:   " << report.h0 << "\n";
    out << "p_hat(0):             " << report.p0_hat << "\n";
    for (const auto& ma : report.methods) {
        out << "  " << method_token(ma.method) << ": h = " << ma.curve.selected_h << " ("
            << selection_mode_token(ma.curve.selection_mode) << "), CI(0) = ["
            << ma.interval_at_zero.lower << ", " << ma.interval_at_zero.upper << "]\n";
    }
    out << "density bandwidth:    " << report.density_bandwidth << "\n";
    out << "positive X:           " << report.positive_x << "/" << report.n_used << " = "
        << report.positive_x_wilson.center << " Wilson [" << report.positive_x_wilson.lower
        << ", " << report.positive_x_wilson.upper << "]\n";
    out << "logistic fit:         alpha = " << report.logistic.alpha_hat
        << ", beta = " << report.logistic.beta_hat << " (" << report.logistic.iterations
        << " iterations)\n";
    out << "logistic p(0):        [" << report.logistic_p0.lower << ", "
        << report.logistic_p0.upper << "]\n";
    out << "deviance GoF:         stat = " << report.gof.statistic << ", dof = " << report.gof.dof
        << ", p = " << report.gof.p_value << "\n";
}

}  // namespace binreg
