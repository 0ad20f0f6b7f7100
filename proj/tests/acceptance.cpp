// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. The dataset-contingent checks at the end run only when
// BINREG_UEFA_DATA points at the full ties file; they are skipped otherwise.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "binreg/bootstrap.hpp"
#include "binreg/conditional_ci.hpp"
#include "binreg/proportion_ci.hpp"
#include "binreg/simulation.hpp"
#include "binreg/uefa.hpp"

using namespace binreg;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("%-4s criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void skip(int criterion, const std::string& what) {
    std::printf("SKIP criterion %2d: %s\n", criterion, what.c_str());
}

bool near(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::string fmt(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

// ---- criterion 1 ---------------------------------------------------------

void criterion_wilson_exactness() {
    const auto ci = wilson_prop(BinomialCount(752, 1353), 0.05);
    const bool ok =
        std::round(ci.lower * 1000.0) == 529.0 && std::round(ci.upper * 1000.0) == 582.0;
    report(1, ok, fmt("wilson(752/1353) = [%.4f, %.4f], three decimals [0.529, 0.582]",
                      ci.lower, ci.upper));
}

// ---- criterion 2 ---------------------------------------------------------

// Weighted-average representation of the wilson interval, independent route.
void wilson_weighted_form(double s, double n, double alpha, double& lo, double& hi) {
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    const double z2 = z * z;
    const double p = s / n;
    const double w = z2 / (n + z2);
    const double center = (1.0 - w) * p + 0.5 * w;
    const double half =
        z * std::sqrt((1.0 - w) * p * (1.0 - p) / (n + z2) + w / (4.0 * (n + z2)));
    lo = center - half;
    hi = center + half;
}

void criterion_algebraic_identities() {
    Rng rng(2024);
    double worst_forms = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const long n = 1 + static_cast<long>(rng.uniform01() * 20000);
        const long s =
            std::min(n, static_cast<long>(rng.uniform01() * static_cast<double>(n + 1)));
        const double alpha = rng.uniform(0.001, 0.5);
        const auto lib = wilson_prop(BinomialCount(s, n), alpha);
        double lo, hi;
        wilson_weighted_form(static_cast<double>(s), static_cast<double>(n), alpha, lo, hi);
        worst_forms = std::max(worst_forms, std::abs(lib.lower - std::clamp(lo, 0.0, 1.0)));
        worst_forms = std::max(worst_forms, std::abs(lib.upper - std::clamp(hi, 0.0, 1.0)));
    }
    report(2, worst_forms < 1e-12,
           fmt("wilson two-form max gap %.2e on 10000 draws (tol 1e-12)", worst_forms));

    double worst_cond = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const double p = rng.uniform01();
        const double ne = std::exp(rng.uniform(std::log(0.1), std::log(1e6)));
        const double alpha = rng.uniform(0.001, 0.5);
        const double z = normal_quantile(1.0 - 0.5 * alpha);
        const ConditionalPoint pt{0.0, p, ne, Bandwidth(1.0)};

        {
            const auto ci = wald_cond(pt, alpha);
            const double half = z * std::sqrt(p * (1.0 - p) / ne);
            worst_cond =
                std::max(worst_cond, std::abs(ci.lower - std::clamp(p - half, 0.0, 1.0)));
            worst_cond =
                std::max(worst_cond, std::abs(ci.upper - std::clamp(p + half, 0.0, 1.0)));
        }
        {
            const auto ci = wilson_cond(pt, alpha);
            double lo, hi;
            wilson_weighted_form(p * ne, ne, alpha, lo, hi);
            worst_cond = std::max(worst_cond, std::abs(ci.lower - std::clamp(lo, 0.0, 1.0)));
            worst_cond = std::max(worst_cond, std::abs(ci.upper - std::clamp(hi, 0.0, 1.0)));
        }
        {
            const auto ci = agresti_coull_cond(pt, alpha);
            const double z2 = z * z;
            const double p_adj = (p * ne + 0.5 * z2) / (ne + z2);
            const double half = z * std::sqrt(p_adj * (1.0 - p_adj) / (ne + z2));
            worst_cond =
                std::max(worst_cond, std::abs(ci.lower - std::clamp(p_adj - half, 0.0, 1.0)));
            worst_cond =
                std::max(worst_cond, std::abs(ci.upper - std::clamp(p_adj + half, 0.0, 1.0)));
        }
    }
    report(2, worst_cond < 1e-12,
           fmt("conditional/classical substitution max gap %.2e on 10000 draws (tol 1e-12)",
               worst_cond));
}

// ---- criterion 3 ---------------------------------------------------------

void criterion_nw_oracle() {
    Rng rng(1501);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + static_cast<int>(rng.uniform01() * 20);
        Eigen::VectorXd xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = rng.uniform(-2.0, 2.0);
            ys[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
        }
        const double x = rng.uniform(-2.0, 2.0);
        const double h = rng.uniform(0.1, 3.0);

        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = (x - xs[i]) / h;
            const double w = std::exp(-0.5 * u * u) / std::sqrt(2.0 * 3.14159265358979323846);
            num += w * ys[i];
            den += w;
        }
        const double direct = num / den;
        const double lib = nw_at(Sample(xs, ys), x, Bandwidth(h), gaussian_kernel());
        worst = std::max(worst, std::abs(direct - lib));
    }
    report(3, worst < 1e-12, fmt("nw vs direct-sum oracle max gap %.2e on 1000 samples", worst));
}

// ---- criterion 4 ---------------------------------------------------------

void criterion_limit_laws() {
    Rng rng(88);
    const int n = 400;
    Eigen::VectorXd xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rng.uniform(-3.0, 3.0);
        ys[i] = rng.bernoulli(0.6) ? 1.0 : 0.0;
    }
    const Sample s(xs, ys);
    const double range = s.xs().maxCoeff() - s.xs().minCoeff();
    const double mean_gap =
        std::abs(nw_at(s, 0.0, Bandwidth(1e8 * range), gaussian_kernel()) - s.ys().mean());
    const double ess = effective_sample_size(s, 0.0, Bandwidth(1e8 * range), gaussian_kernel());
    const double ess_rel = std::abs(ess - n * std::sqrt(2.0)) / (n * std::sqrt(2.0));

    bool ok = mean_gap < 1e-9 && ess_rel < 1e-6;
    ok = ok && scenario1_truth(0.0) == 0.5;
    ok = ok && near(scenario1_truth(3.14159265358979323846 / 2.0), 0.95257, 5e-6);
    ok = ok && near(scenario2_truth(0.0), 0.52199, 5e-6);
    report(4, ok,
           fmt("limits: |nw-mean| %.1e (tol 1e-9), ess rel %.1e (tol 1e-6), truths "
               "%.6f/%.6f/%.6f",
               mean_gap, ess_rel, scenario1_truth(0.0),
               scenario1_truth(3.14159265358979323846 / 2.0), scenario2_truth(0.0)));
}

// ---- criteria 5 and 6 ----------------------------------------------------

struct CellSummary {
    double wald = 0.0, wilson = 0.0, ac = 0.0;
};

CellSummary summarize(const CoverageReport& report, double x) {
    CellSummary out;
    for (const auto& cell : report.cells) {
        if (cell.x != x) continue;
        if (cell.method == IntervalMethod::Wald) out.wald = cell.coverage;
        if (cell.method == IntervalMethod::Wilson) out.wilson = cell.coverage;
        if (cell.method == IntervalMethod::AgrestiCoull) out.ac = cell.coverage;
    }
    return out;
}

void criterion_scenario1_table() {
    constexpr double half_pi = 3.14159265358979323846 / 2.0;
    constexpr double tol = 0.035;

    ScenarioSpec spec;
    spec.id = 1;
    spec.m_replicates = 500;
    spec.bootstrap.b_resamples = 500;
    spec.bootstrap.seed = 20250810;

    spec.n = 250;
    spec.eval_points = {0.0};
    const auto small = summarize(run_coverage_study(spec), 0.0);
    report(5, near(small.wilson, 0.932, tol) && near(small.ac, 0.944, tol),
           fmt("scenario 1 n=250 x=0: wilson %.3f (ref 0.932), ac %.3f (ref 0.944), tol 0.035",
               small.wilson, small.ac));

    spec.n = 1000;
    spec.eval_points = {0.0, half_pi};
    const auto study = run_coverage_study(spec);
    const auto center = summarize(study, 0.0);
    const auto edge = summarize(study, half_pi);
    report(5, near(center.wilson, 0.952, tol) && near(center.ac, 0.951, tol),
           fmt("scenario 1 n=1000 x=0: wilson %.3f (ref 0.952), ac %.3f (ref 0.951)",
               center.wilson, center.ac));
    report(5, near(edge.wilson, 0.958, tol) && near(edge.ac, 0.961, tol),
           fmt("scenario 1 n=1000 x=pi/2: wilson %.3f (ref 0.958), ac %.3f (ref 0.961)",
               edge.wilson, edge.ac));
    report(5, edge.wald < edge.wilson,
           fmt("scenario 1 n=1000 x=pi/2 ordering: wald %.3f < wilson %.3f (refs 0.860/0.958)",
               edge.wald, edge.wilson));
}

void criterion_scenario2() {
    ScenarioSpec spec;
    spec.id = 2;
    spec.n = 1350;
    spec.eval_points = {0.0};
    spec.m_replicates = 200;
    spec.bootstrap.b_resamples = 500;
    spec.bootstrap.seed = 61;
    spec.pilot_rule = PilotRule::Aicc;
    const auto cells = summarize(run_coverage_study(spec), 0.0);
    report(6, cells.wilson >= 0.91 && cells.wilson <= 0.99,
           fmt("scenario 2 wilson coverage %.3f in [0.91, 0.99] (ref 0.953)", cells.wilson));
    report(6, cells.wald <= cells.wilson + 0.02,
           fmt("scenario 2 wald %.3f <= wilson %.3f + 0.02 (refs 0.934/0.953)", cells.wald,
               cells.wilson));
}

// ---- criterion 7 ---------------------------------------------------------

void criterion_classical_coverage() {
    const int m = 10000;
    {
        Rng rng(9100);
        int wald_cover = 0, wilson_cover = 0;
        for (int rep = 0; rep < m; ++rep) {
            long s = 0;
            for (int i = 0; i < 20; ++i) s += rng.bernoulli(0.1) ? 1 : 0;
            const BinomialCount count(s, 20);
            const auto wa = wald_prop(count, 0.05);
            const auto wi = wilson_prop(count, 0.05);
            if (wa.lower <= 0.1 && 0.1 <= wa.upper) ++wald_cover;
            if (wi.lower <= 0.1 && 0.1 <= wi.upper) ++wilson_cover;
        }
        const double wald = static_cast<double>(wald_cover) / m;
        const double wilson = static_cast<double>(wilson_cover) / m;
        report(7, wald < 0.93 && wilson >= 0.93,
               fmt("p=0.1 n=20: wald %.4f < 0.93, wilson %.4f >= 0.93 (exact 0.876/0.957)",
                   wald, wilson));
    }
    {
        // Exact coverage here is 0.9351, two sigma above the 0.93 edge at
        // this replication count; the draw is pinned by seed.
        Rng rng(1);
        int wilson_cover = 0, ac_cover = 0;
        for (int rep = 0; rep < m; ++rep) {
            long s = 0;
            for (int i = 0; i < 50; ++i) s += rng.bernoulli(0.5) ? 1 : 0;
            const BinomialCount count(s, 50);
            const auto wi = wilson_prop(count, 0.05);
            const auto ac = agresti_coull_prop(count, 0.05);
            if (wi.lower <= 0.5 && 0.5 <= wi.upper) ++wilson_cover;
            if (ac.lower <= 0.5 && 0.5 <= ac.upper) ++ac_cover;
        }
        const double wilson = static_cast<double>(wilson_cover) / m;
        const double ac = static_cast<double>(ac_cover) / m;
        report(7, wilson > 0.93 && wilson < 0.97 && ac > 0.93 && ac < 0.97,
               fmt("p=0.5 n=50: wilson %.4f, ac %.4f in [0.93, 0.97] (exact 0.9351)", wilson,
                   ac));
    }
}

// ---- criterion 8 ---------------------------------------------------------

void criterion_bias_term() {
    bool zero_ok = true;
    for (long n : {2L, 10L, 50L, 1000L}) zero_ok = zero_ok && wald_bias_term(0.5, n) == 0.0;
    double worst = 0.0;
    for (double p = 0.01; p < 0.5; p += 0.003) {
        worst = std::max(worst, std::abs(wald_bias_term(p, 37) + wald_bias_term(1.0 - p, 37)));
    }
    report(8, zero_ok && worst < 1e-12,
           fmt("bias term: exact zero at p=1/2, antisymmetry gap %.2e (tol 1e-12)", worst));
}

// ---- criterion 9 ---------------------------------------------------------

void criterion_bootstrap_determinism() {
    ScenarioSpec draw;
    draw.id = 2;
    draw.n = 400;
    Rng rng(5);
    const Sample s = draw_scenario_sample(draw, rng);

    BootstrapConfig config;
    config.b_resamples = 600;
    config.seed = 777;
    config.method = IntervalMethod::Wilson;

    const auto a = select_ci_bandwidth(s, 0.0, config, gaussian_kernel());
    const auto b = select_ci_bandwidth(s, 0.0, config, gaussian_kernel());
    const auto c = select_ci_bandwidth(s, 0.0, config, gaussian_kernel(), std::nullopt, 1);
    const auto d = select_ci_bandwidth(s, 0.0, config, gaussian_kernel(), std::nullopt, 4);

    auto identical = [](const CoverageCurve& lhs, const CoverageCurve& rhs) {
        return (lhs.coverage.array() == rhs.coverage.array()).all() &&
               lhs.selected_h == rhs.selected_h && lhs.selection_mode == rhs.selection_mode;
    };
    report(9, identical(a, b) && identical(a, c) && identical(a, d),
           fmt("bootstrap curves bit-identical across reruns and 1/4 threads (h = %.4f)",
               a.selected_h));
}

// ---- criterion 10 --------------------------------------------------------

double loglik(const Sample& s, double a, double b) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double t = a + b * s.xs()[i];
        const double log1pe = t > 30.0 ? t : std::log1p(std::exp(t));
        ll += s.ys()[i] > 0.5 ? t - log1pe : -log1pe;
    }
    return ll;
}

void criterion_logistic() {
    Rng rng(321);
    const int n = 2000;
    Eigen::VectorXd xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rng.uniform(-2.0, 2.0);
        const double p = 1.0 / (1.0 + std::exp(-(0.1 + 0.8 * xs[i])));
        ys[i] = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    const Sample s(xs, ys);
    const auto fit = fit_logistic(s);

    double score_a = 0.0, score_b = 0.0;
    for (int i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-(fit.alpha_hat + fit.beta_hat * xs[i])));
        score_a += ys[i] - p;
        score_b += xs[i] * (ys[i] - p);
    }
    const bool score_ok = std::abs(score_a) < 1e-6 && std::abs(score_b) < 1e-6;

    const double step = 1e-5;
    const double fd_a = (loglik(s, fit.alpha_hat + step, fit.beta_hat) -
                         loglik(s, fit.alpha_hat - step, fit.beta_hat)) /
                        (2.0 * step);
    const double fd_b = (loglik(s, fit.alpha_hat, fit.beta_hat + step) -
                         loglik(s, fit.alpha_hat, fit.beta_hat - step)) /
                        (2.0 * step);
    const double scale =
        std::max({1.0, std::abs(score_a), std::abs(score_b), std::abs(fd_a), std::abs(fd_b)});
    const bool fd_ok =
        std::abs(fd_a - score_a) / scale < 1e-4 && std::abs(fd_b - score_b) / scale < 1e-4;

    LogisticFit published;
    published.converged = true;
    published.alpha_hat = 0.088;
    published.covariance(0, 0) = 0.0625 * 0.0625;
    const auto ci = logistic_p0_interval(published, 0.05);
    const bool ci_ok =
        std::round(ci.lower * 1000.0) == 491.0 && std::round(ci.upper * 1000.0) == 552.0;

    report(10, fit.converged && score_ok,
           fmt("logistic score residuals %.1e / %.1e (tol 1e-6)", std::abs(score_a),
               std::abs(score_b)));
    report(10, fd_ok,
           fmt("finite-difference gradient gap %.1e relative (tol 1e-4)",
               std::max(std::abs(fd_a - score_a), std::abs(fd_b - score_b)) / scale));
    report(10, ci_ok,
           fmt("p(0) interval from (0.088, se 0.0625) = [%.4f, %.4f], three decimals "
               "[0.491, 0.552]",
               ci.lower, ci.upper));
}

// ---- criterion 11 (dataset-contingent) ------------------------------------

void criterion_dataset() {
    const char* path = std::getenv("BINREG_UEFA_DATA");
    if (path == nullptr || *path == '\0') {
        skip(11, "full ties dataset not supplied (set BINREG_UEFA_DATA to run)");
        return;
    }
    const auto ties = load_ties(path);

    AnalysisOptions options;
    options.bootstrap.b_resamples = 5000;
    options.bootstrap.seed = 1;
    const auto full = run_slha_analysis(ties, options);
    report(11, near(full.h0, 0.525, 0.05), fmt("h0 = %.3f (ref 0.525 +/- 0.05)", full.h0));
    report(11, near(full.p0_hat, 0.539, 0.01),
           fmt("p_hat(0) = %.4f (ref 0.539 +/- 0.01)", full.p0_hat));
    for (const auto& ma : full.methods) {
        report(11,
               near(ma.interval_at_zero.lower, 0.504, 0.01) &&
                   near(ma.interval_at_zero.upper, 0.574, 0.01),
               fmt("%s interval at 0 = [%.4f, %.4f] (ref [0.504, 0.574] +/- 0.01, h = %.3f)",
                   method_token(ma.method), ma.interval_at_zero.lower,
                   ma.interval_at_zero.upper, ma.curve.selected_h));
    }
    report(11,
           std::round(full.positive_x_wilson.lower * 1000.0) == 529.0 &&
               std::round(full.positive_x_wilson.upper * 1000.0) == 582.0,
           fmt("positive-X wilson = [%.4f, %.4f] (ref [0.529, 0.582])",
               full.positive_x_wilson.lower, full.positive_x_wilson.upper));

    options.exclude_extra_time = true;
    const auto trimmed = run_slha_analysis(ties, options);
    report(11, trimmed.n_used == 1269, fmt("no-extra-time n = %ld (ref 1269)", trimmed.n_used));
    report(11, near(trimmed.p0_hat, 0.540, 0.01),
           fmt("no-extra-time p_hat(0) = %.4f (ref 0.540 +/- 0.01)", trimmed.p0_hat));
}

}  // namespace

int main() {
    criterion_wilson_exactness();
    criterion_algebraic_identities();
    criterion_nw_oracle();
    criterion_limit_laws();
    criterion_scenario1_table();
    criterion_scenario2();
    criterion_classical_coverage();
    criterion_bias_term();
    criterion_bootstrap_determinism();
    criterion_logistic();
    criterion_dataset();

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance checks failed\n", failures);
    return 1;
}
