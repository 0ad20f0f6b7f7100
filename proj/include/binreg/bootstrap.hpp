#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "binreg/interval.hpp"
#include "binreg/kernel.hpp"
#include "binreg/rng.hpp"
#include "binreg/sample.hpp"
#include "binreg/smoothing.hpp"

namespace binreg {

// 200 equispaced candidate bandwidths on [0.05, 2]. Reasonable for
// predictors on a unit-ish scale; override when the data live elsewhere.
Eigen::VectorXd default_ci_grid();

struct BootstrapConfig {
    int b_resamples = 1000;
    Eigen::VectorXd h_grid = default_ci_grid();
    double alpha = 0.05;
    std::uint64_t seed = 0;
    IntervalMethod method = IntervalMethod::Wilson;
};

// Throws std::invalid_argument unless b_resamples >= 1, alpha in (0,1) and
// h_grid is strictly increasing with positive entries.
void validate(const BootstrapConfig& config);

enum class SelectionMode { ThresholdAverage, ArgmaxFallback };

inline const char* selection_mode_token(SelectionMode m) {
    return m == SelectionMode::ThresholdAverage ? "threshold-average" : "argmax-fallback";
}

// Estimated bootstrap coverage of the configured interval across the
// bandwidth grid, together with the bandwidth picked from the curve.
struct CoverageCurve {
    Eigen::VectorXd h_values;
    Eigen::VectorXd coverage;  // exact fractions k/B
    double selected_h = 0.0;
    SelectionMode selection_mode = SelectionMode::ArgmaxFallback;
};

// One resample: the design values stay fixed, the responses are redrawn as
// Bernoulli(pilot_fit[i]).
Sample bootstrap_resample(const Sample& sample, const Eigen::VectorXd& pilot_fit, Rng& rng);

// Bandwidth choice from an estimated coverage curve: the mean of all grid
// values whose coverage reaches 1-alpha, or the argmax (ties to the smaller
// bandwidth) when none does.
std::pair<double, SelectionMode> select_h_from_curve(const Eigen::VectorXd& h_values,
                                                     const Eigen::VectorXd& coverage,
                                                     double alpha);

// Bootstrap coverage curves at x for several interval methods in one pass.
// All methods see the same resamples: replicate b draws its responses from
// Rng::stream(config.seed, b), which makes the result independent of the
// number of worker threads and of whether methods are estimated jointly.
// A (resample, h) pair whose interval cannot be built counts as
// non-covering. max_threads = 0 means use all hardware threads.
std::vector<CoverageCurve> estimate_coverage_curves(const Sample& sample, double x,
                                                    Bandwidth h0, const BootstrapConfig& config,
                                                    const KernelSpec& kernel,
                                                    const std::vector<IntervalMethod>& methods,
                                                    int max_threads = 0);

// Single-method convenience wrapper around estimate_coverage_curves.
CoverageCurve estimate_coverage_curve(const Sample& sample, double x, Bandwidth h0,
                                      const BootstrapConfig& config, const KernelSpec& kernel,
                                      int max_threads = 0);

// The full selection pipeline: pilot bandwidth (corrected-AIC on the default
// pilot grid unless one is supplied), coverage curve, bandwidth choice.
CoverageCurve select_ci_bandwidth(const Sample& sample, double x, const BootstrapConfig& config,
                                  const KernelSpec& kernel,
                                  std::optional<Bandwidth> pilot = std::nullopt,
                                  int max_threads = 0);

// Serialization for plotting: CSV columns h,coverage; JSON additionally
// carries the selection result and a config echo.
void write_coverage_csv(std::ostream& out, const CoverageCurve& curve);
nlohmann::json coverage_curve_json(const CoverageCurve& curve, const BootstrapConfig& config);

}  // namespace binreg
