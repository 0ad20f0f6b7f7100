#include "binreg/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "binreg/conditional_ci.hpp"
#include "binreg/errors.hpp"

namespace binreg {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// Stream ids for the two independent random stages of a replicate.
constexpr std::uint64_t sample_stage = 0x5ead0001;
constexpr std::uint64_t bootstrap_stage = 0x5ead0002;

double logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

const std::vector<IntervalMethod> all_methods{IntervalMethod::Wald, IntervalMethod::Wilson,
                                              IntervalMethod::AgrestiCoull};

}  // namespace

PilotRule default_pilot_rule(int scenario_id) {
    return scenario_id == 1 ? PilotRule::FixedFormula : PilotRule::Aicc;
}

void validate(const ScenarioSpec& spec) {
    if (spec.id != 1 && spec.id != 2) throw std::invalid_argument("ScenarioSpec: id must be 1 or 2");
    if (spec.n < 3) throw std::invalid_argument("ScenarioSpec: n must be >= 3");
    if (spec.m_replicates < 1) throw std::invalid_argument("ScenarioSpec: m_replicates must be >= 1");
    if (spec.eval_points.empty()) throw std::invalid_argument("ScenarioSpec: no evaluation points");
    check_alpha(spec.alpha);
    validate(spec.bootstrap);
}

double scenario1_truth(double x) { return logistic(3.0 * std::sin(x)); }

double scenario2_truth(double x) { return logistic(0.088 + 0.770 * x); }

double scenario_truth(int scenario_id, double x) {
    if (scenario_id == 1) return scenario1_truth(x);
    if (scenario_id == 2) return scenario2_truth(x);
    throw std::invalid_argument("scenario_truth: id must be 1 or 2");
}

Bandwidth scenario1_pilot(long n) {
    if (n < 1) throw std::invalid_argument("scenario1_pilot: n must be positive");
    return Bandwidth(0.745 * std::pow(static_cast<double>(n), -0.2));
}

Sample draw_scenario_sample(const ScenarioSpec& spec, Rng& rng) {
    constexpr double pi = 3.14159265358979323846;
    Eigen::VectorXd xs(spec.n), ys(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        double x;
        if (spec.id == 1) {
            x = rng.uniform(-pi, pi);
        } else {
            x = rng.bernoulli(0.45) ? rng.normal(-1.0, 0.5) : rng.normal(0.8, 0.5);
        }
        xs[i] = x;
        ys[i] = rng.bernoulli(scenario_truth(spec.id, x)) ? 1.0 : 0.0;
    }
    return Sample(std::move(xs), std::move(ys));
}

CoverageReport run_coverage_study(const ScenarioSpec& spec, int max_threads) {
    validate(spec);

    const KernelSpec kernel = gaussian_kernel();
    const int n_m = spec.m_replicates;
    const auto n_x = spec.eval_points.size();
    const auto n_methods = all_methods.size();
    const auto cells_per_rep = n_x * n_methods;

    struct Outcome {
        bool covered = false;
        double length = nan_value;
        double h = nan_value;
        bool failed = true;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(n_m) * cells_per_rep);

    std::atomic<int> next_rep{0};
    auto run_replicates = [&]() {
        for (;;) {
            const int m = next_rep.fetch_add(1);
            if (m >= n_m) break;

            Rng sample_rng =
                Rng::stream(mix_seed(spec.bootstrap.seed, sample_stage), static_cast<std::uint64_t>(m));
            const Sample sample = draw_scenario_sample(spec, sample_rng);

            BootstrapConfig cfg = spec.bootstrap;
            cfg.seed = mix_seed(mix_seed(spec.bootstrap.seed, bootstrap_stage),
                                static_cast<std::uint64_t>(m));

            Bandwidth pilot = (spec.pilot_rule == PilotRule::FixedFormula)
                                  ? scenario1_pilot(spec.n)
                                  : select_h0_aicc(sample, kernel, default_pilot_grid(sample));

            for (std::size_t xi = 0; xi < n_x; ++xi) {
                const double x = spec.eval_points[xi];
                const double truth = scenario_truth(spec.id, x);
                std::vector<CoverageCurve> curves;
                try {
                    // inner bootstrap stays serial: replicates carry the parallelism
                    curves = estimate_coverage_curves(sample, x, pilot, cfg, kernel,
                                                      all_methods, 1);
                } catch (const Error&) {
                    continue;  // all methods at this point stay failed
                }
                for (std::size_t mi = 0; mi < n_methods; ++mi) {
                    auto& slot = outcomes[static_cast<std::size_t>(m) * cells_per_rep +
                                          xi * n_methods + mi];
                    try {
                        const double h = curves[mi].selected_h;
                        const auto pt = conditional_point(sample, x, Bandwidth(h), kernel);
                        const auto ci = conditional_interval(all_methods[mi], pt, spec.alpha);
                        slot.covered = ci.lower <= truth && truth <= ci.upper;
                        slot.length = ci.upper - ci.lower;
                        slot.h = h;
                        slot.failed = false;
                    } catch (const Error&) {
                        // leave slot.failed set; counts as non-covering
                    }
                }
            }
        }
    };

    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int workers = (max_threads > 0) ? std::min(max_threads, hw) : hw;
    workers = std::max(1, std::min(workers, n_m));
    if (workers == 1) {
        run_replicates();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_replicates);
        for (auto& t : pool) t.join();
    }

    CoverageReport report;
    report.spec = spec;
    report.cells.reserve(cells_per_rep);
    for (std::size_t xi = 0; xi < n_x; ++xi) {
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            CoverageCell cell;
            cell.x = spec.eval_points[xi];
            cell.method = all_methods[mi];
            cell.lengths.resize(static_cast<std::size_t>(n_m), nan_value);
            cell.selected_h.resize(static_cast<std::size_t>(n_m), nan_value);

            long covered = 0;
            double length_sum = 0.0;
            std::vector<double> hs;
            hs.reserve(static_cast<std::size_t>(n_m));
            for (int m = 0; m < n_m; ++m) {
                const auto& slot = outcomes[static_cast<std::size_t>(m) * cells_per_rep +
                                            xi * n_methods + mi];
                if (slot.failed) {
                    ++cell.failures;
                    continue;
                }
                cell.lengths[static_cast<std::size_t>(m)] = slot.length;
                cell.selected_h[static_cast<std::size_t>(m)] = slot.h;
                if (slot.covered) ++covered;
                length_sum += slot.length;
                hs.push_back(slot.h);
            }
            cell.coverage = static_cast<double>(covered) / static_cast<double>(n_m);
            const auto built = static_cast<double>(n_m - cell.failures);
            cell.mean_length = built > 0 ? length_sum / built : nan_value;
            if (!hs.empty()) {
                std::sort(hs.begin(), hs.end());
                cell.h_min = hs.front();
                cell.h_q25 = quantile_sorted(hs, 0.25);
                cell.h_median = quantile_sorted(hs, 0.50);
                cell.h_q75 = quantile_sorted(hs, 0.75);
                cell.h_max = hs.back();
            } else {
                cell.h_min = cell.h_q25 = cell.h_median = cell.h_q75 = cell.h_max = nan_value;
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

void write_report_csv(std::ostream& out, const CoverageReport& report) {
    const auto old_precision = out.precision(12);
    out << "scenario,n,x,method,coverage,mean_length,h_q25,h_median,h_q75\n";
    for (const auto& cell : report.cells) {
        out << report.spec.id << ',' << report.spec.n << ',' << cell.x << ','
            << method_token(cell.method) << ',' << cell.coverage << ',' << cell.mean_length
            << ',' << cell.h_q25 << ',' << cell.h_median << ',' << cell.h_q75 << '\n';
    }
    out.precision(old_precision);
}

void write_report_samples_csv(std::ostream& out, const CoverageReport& report) {
    const auto old_precision = out.precision(12);
    out << "scenario,n,x,method,replicate,length,selected_h\n";
    for (const auto& cell : report.cells) {
        for (std::size_t m = 0; m < cell.lengths.size(); ++m) {
            out << report.spec.id << ',' << report.spec.n << ',' << cell.x << ','
                << method_token(cell.method) << ',' << m << ',';
            if (std::isnan(cell.lengths[m])) {
                out << ',';
            } else {
                out << cell.lengths[m] << ',' << cell.selected_h[m];
            }
            out << '\n';
        }
    }
    out.precision(old_precision);
}

nlohmann::json report_json(const CoverageReport& report) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : report.cells) {
        cells.push_back({{"x", cell.x},
                         {"method", method_token(cell.method)},
                         {"coverage", cell.coverage},
                         {"mean_length", cell.mean_length},
                         {"failures", cell.failures},
                         {"h_min", cell.h_min},
                         {"h_q25", cell.h_q25},
                         {"h_median", cell.h_median},
                         {"h_q75", cell.h_q75},
                         {"h_max", cell.h_max}});
    }
    return nlohmann::json{
        {"scenario", report.spec.id},
        {"n", report.spec.n},
        {"m_replicates", report.spec.m_replicates},
        {"alpha", report.spec.alpha},
        {"b_resamples", report.spec.bootstrap.b_resamples},
        {"seed", report.spec.bootstrap.seed},
        {"pilot_rule", report.spec.pilot_rule == PilotRule::FixedFormula ? "fixed-formula" : "aicc"},
        {"cells", std::move(cells)}};
}

}  // namespace binreg
