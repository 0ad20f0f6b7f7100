#include "binreg/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "binreg/errors.hpp"

namespace binreg {

namespace {

int worker_count(int max_threads, int jobs) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int workers = (max_threads > 0) ? std::min(max_threads, hw) : hw;
    return std::max(1, std::min(workers, jobs));
}

}  // namespace

Eigen::VectorXd default_ci_grid() { return Eigen::VectorXd::LinSpaced(200, 0.05, 2.0); }

void validate(const BootstrapConfig& config) {
    if (config.b_resamples < 1) {
        throw std::invalid_argument("BootstrapConfig: b_resamples must be >= 1");
    }
    check_alpha(config.alpha);
    if (config.h_grid.size() == 0) {
        throw std::invalid_argument("BootstrapConfig: empty bandwidth grid");
    }
    for (Eigen::Index i = 0; i < config.h_grid.size(); ++i) {
        if (!(config.h_grid[i] > 0.0)) {
            throw std::invalid_argument("BootstrapConfig: grid bandwidths must be positive");
        }
        if (i > 0 && !(config.h_grid[i] > config.h_grid[i - 1])) {
            throw std::invalid_argument("BootstrapConfig: grid must be strictly increasing");
        }
    }
}

Sample bootstrap_resample(const Sample& sample, const Eigen::VectorXd& pilot_fit, Rng& rng) {
    if (pilot_fit.size() != sample.size()) {
        throw std::invalid_argument("bootstrap_resample: pilot_fit length mismatch");
    }
    Eigen::VectorXd ys(sample.size());
    for (Eigen::Index i = 0; i < ys.size(); ++i) {
        const double p = pilot_fit[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("bootstrap_resample: pilot_fit values must lie in [0,1]");
        }
        ys[i] = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    return Sample(sample.xs(), std::move(ys));
}

std::pair<double, SelectionMode> select_h_from_curve(const Eigen::VectorXd& h_values,
                                                     const Eigen::VectorXd& coverage,
                                                     double alpha) {
    if (h_values.size() == 0 || h_values.size() != coverage.size()) {
        throw std::invalid_argument("select_h_from_curve: empty or mismatched curve");
    }
    check_alpha(alpha);
    const double threshold = 1.0 - alpha;
    double sum = 0.0;
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < h_values.size(); ++i) {
        if (coverage[i] >= threshold) {
            sum += h_values[i];
            ++hits;
        }
    }
    if (hits > 0) {
        return {sum / static_cast<double>(hits), SelectionMode::ThresholdAverage};
    }
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < h_values.size(); ++i) {
        if (coverage[i] > coverage[best]) best = i;
    }
    return {h_values[best], SelectionMode::ArgmaxFallback};
}

std::vector<CoverageCurve> estimate_coverage_curves(const Sample& sample, double x,
                                                    Bandwidth h0, const BootstrapConfig& config,
                                                    const KernelSpec& kernel,
                                                    const std::vector<IntervalMethod>& methods,
                                                    int max_threads) {
    validate(config);
    if (methods.empty()) {
        throw std::invalid_argument("estimate_coverage_curves: no methods requested");
    }

    const Eigen::Index n = sample.size();
    const Eigen::Index n_h = config.h_grid.size();
    const int n_b = config.b_resamples;
    const auto n_methods = methods.size();

    // Step 1: pilot fit and the bootstrap "truth" at x.
    const double target = nw_at(sample, x, h0, kernel);
    const Eigen::VectorXd pilot_fit = nw_fitted(sample, h0, kernel);

    // Kernel weights at x per candidate bandwidth. The design values are the
    // same in every resample, so denominators and local sample sizes are
    // resample-independent. Resample estimates below reuse exactly the
    // dot/sum/clamp sequence nw_at runs, so a resample equal to the original
    // data reproduces the target bit for bit.
    std::vector<Eigen::VectorXd> weights(static_cast<std::size_t>(n_h));
    Eigen::VectorXd denom(n_h), n_eff(n_h);
    for (Eigen::Index k = 0; k < n_h; ++k) {
        weights[static_cast<std::size_t>(k)] =
            kernel_weights(sample.xs(), x, Bandwidth(config.h_grid[k]), kernel);
        denom[k] = weights[static_cast<std::size_t>(k)].sum();
        n_eff[k] = denom[k] / kernel.roughness;
    }

    const double z = normal_quantile(1.0 - 0.5 * config.alpha);

    // Covered counts per (bandwidth, method). Replicate b draws only from
    // Rng::stream(config.seed, b) and the merge is an integer sum, so the
    // result cannot depend on how replicates are spread over threads.
    const int workers = worker_count(max_threads, n_b);
    std::vector<std::vector<long>> worker_counts(
        static_cast<std::size_t>(workers),
        std::vector<long>(static_cast<std::size_t>(n_h) * n_methods, 0));

    std::atomic<int> next_b{0};
    auto run_replicates = [&](int worker) {
        auto& counts = worker_counts[static_cast<std::size_t>(worker)];
        Eigen::VectorXd responses(n);
        for (;;) {
            const int b = next_b.fetch_add(1);
            if (b >= n_b) break;
            Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(b));
            for (Eigen::Index i = 0; i < n; ++i) {
                responses[i] = rng.bernoulli(pilot_fit[i]) ? 1.0 : 0.0;
            }
            for (Eigen::Index k = 0; k < n_h; ++k) {
                if (denom[k] <= 0.0) continue;  // interval not buildable: non-covering
                const double p_star = std::clamp(
                    weights[static_cast<std::size_t>(k)].dot(responses) / denom[k], 0.0, 1.0);
                for (std::size_t m = 0; m < n_methods; ++m) {
                    const auto raw = detail::raw_interval(methods[m], p_star, n_eff[k], z);
                    if (raw.lower <= target && target <= raw.upper) {
                        ++counts[static_cast<std::size_t>(k) * n_methods + m];
                    }
                }
            }
        }
    };

    if (workers == 1) {
        run_replicates(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_replicates, w);
        for (auto& t : pool) t.join();
    }

    std::vector<CoverageCurve> curves(n_methods);
    for (std::size_t m = 0; m < n_methods; ++m) {
        Eigen::VectorXd coverage(n_h);
        for (Eigen::Index k = 0; k < n_h; ++k) {
            long total = 0;
            for (const auto& counts : worker_counts) {
                total += counts[static_cast<std::size_t>(k) * n_methods + m];
            }
            coverage[k] = static_cast<double>(total) / static_cast<double>(n_b);
        }
        auto [h, mode] = select_h_from_curve(config.h_grid, coverage, config.alpha);
        curves[m] = CoverageCurve{config.h_grid, std::move(coverage), h, mode};
    }
    return curves;
}

CoverageCurve estimate_coverage_curve(const Sample& sample, double x, Bandwidth h0,
                                      const BootstrapConfig& config, const KernelSpec& kernel,
                                      int max_threads) {
    return estimate_coverage_curves(sample, x, h0, config, kernel, {config.method},
                                    max_threads)[0];
}

CoverageCurve select_ci_bandwidth(const Sample& sample, double x, const BootstrapConfig& config,
                                  const KernelSpec& kernel, std::optional<Bandwidth> pilot,
                                  int max_threads) {
    const Bandwidth h0 =
        pilot ? *pilot : select_h0_aicc(sample, kernel, default_pilot_grid(sample));
    return estimate_coverage_curve(sample, x, h0, config, kernel, max_threads);
}

void write_coverage_csv(std::ostream& out, const CoverageCurve& curve) {
    const auto old_precision = out.precision(12);
    out << "h,coverage\n";
    for (Eigen::Index i = 0; i < curve.h_values.size(); ++i) {
        out << curve.h_values[i] << ',' << curve.coverage[i] << '\n';
    }
    out.precision(old_precision);
}

nlohmann::json coverage_curve_json(const CoverageCurve& curve, const BootstrapConfig& config) {
    nlohmann::json j;
    j["h"] = std::vector<double>(curve.h_values.begin(), curve.h_values.end());
    j["coverage"] = std::vector<double>(curve.coverage.begin(), curve.coverage.end());
    j["selected_h"] = curve.selected_h;
    j["selection_mode"] = selection_mode_token(curve.selection_mode);
    j["config"] = {{"b_resamples", config.b_resamples},
                   {"alpha", config.alpha},
                   {"seed", config.seed},
                   {"method", method_token(config.method)},
                   {"grid_min", config.h_grid[0]},
                   {"grid_max", config.h_grid[config.h_grid.size() - 1]},
                   {"grid_size", config.h_grid.size()}};
    return j;
}

}  // namespace binreg
