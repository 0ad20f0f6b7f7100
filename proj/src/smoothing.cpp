#include "binreg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "binreg/errors.hpp"

namespace binreg {

namespace {

double sample_sd(const Eigen::VectorXd& xs) {
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 2) return 0.0;
    const double mean = xs.mean();
    return std::sqrt((xs.array() - mean).square().sum() / (n - 1.0));
}

// Quantile with linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

// Per-observation leave-in numerator and denominator of the NW fit for one
// bandwidth, from precomputed pairwise distances (upper triangle, packed).
void pairwise_fit_sums(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                       const std::vector<double>& pair_dist, double h, const KernelSpec& kernel,
                       Eigen::VectorXd& num, Eigen::VectorXd& denom) {
    const Eigen::Index n = xs.size();
    num.setZero(n);
    denom.setZero(n);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j, ++k) {
            double w = kernel.evaluate(pair_dist[k] / h);
            if (w < weight_underflow) w = 0.0;
            denom[i] += w;
            denom[j] += w;
            num[i] += w * ys[j];
            num[j] += w * ys[i];
        }
    }
    num.array() += kernel.at_zero * ys.array();
    denom.array() += kernel.at_zero;
}

std::vector<double> packed_distances(const Eigen::VectorXd& xs) {
    const Eigen::Index n = xs.size();
    std::vector<double> dist(static_cast<std::size_t>(n) * (n - 1) / 2);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j, ++k) dist[k] = std::abs(xs[i] - xs[j]);
    }
    return dist;
}

}  // namespace

Eigen::VectorXd kernel_weights(const Eigen::VectorXd& xs, double x, Bandwidth h,
                               const KernelSpec& kernel) {
    Eigen::VectorXd w = ((x - xs.array()) / h.value).unaryExpr(kernel.evaluate).matrix();
    return (w.array() < weight_underflow).select(0.0, w);
}

double kde_at(const Sample& sample, double x, Bandwidth h, const KernelSpec& kernel) {
    const double total = kernel_weights(sample.xs(), x, h, kernel).sum();
    return total / (static_cast<double>(sample.size()) * h.value);
}

double nw_at(const Sample& sample, double x, Bandwidth h, const KernelSpec& kernel) {
    const Eigen::VectorXd w = kernel_weights(sample.xs(), x, h, kernel);
    const double total = w.sum();
    if (total <= 0.0) {
        throw NoLocalData("nw_at: no design points within kernel support of x");
    }
    const double value = w.dot(sample.ys()) / total;
    return std::clamp(value, 0.0, 1.0);
}

double effective_sample_size(const Sample& sample, double x, Bandwidth h,
                             const KernelSpec& kernel) {
    return kernel_weights(sample.xs(), x, h, kernel).sum() / kernel.roughness;
}

Eigen::VectorXd nw_fitted(const Sample& sample, Bandwidth h, const KernelSpec& kernel) {
    const std::vector<double> dist = packed_distances(sample.xs());
    Eigen::VectorXd num, denom;
    pairwise_fit_sums(sample.xs(), sample.ys(), dist, h.value, kernel, num, denom);
    return (num.array() / denom.array()).cwiseMax(0.0).cwiseMin(1.0);
}

Eigen::VectorXd default_pilot_grid(const Sample& sample) {
    const double sd = sample_sd(sample.xs());
    if (sd <= 0.0) {
        throw DegenerateSample("default_pilot_grid: sample has zero predictor spread");
    }
    const Eigen::VectorXd log_h =
        Eigen::VectorXd::LinSpaced(100, std::log(0.05 * sd), std::log(5.0 * sd));
    return log_h.array().exp();
}

Bandwidth select_h0_aicc(const Sample& sample, const KernelSpec& kernel,
                         const Eigen::VectorXd& grid) {
    const Eigen::Index n = sample.size();
    if (n < 3) throw std::invalid_argument("select_h0_aicc: need n >= 3");
    if (grid.size() == 0) throw NoValidBandwidth("select_h0_aicc: empty bandwidth grid");

    const std::vector<double> dist = packed_distances(sample.xs());
    const auto nd = static_cast<double>(n);

    double best_score = std::numeric_limits<double>::infinity();
    double best_h = 0.0;
    bool found = false;
    Eigen::VectorXd num, denom;
    for (Eigen::Index g = 0; g < grid.size(); ++g) {
        const double h = grid[g];
        pairwise_fit_sums(sample.xs(), sample.ys(), dist, h, kernel, num, denom);
        const double trace = (kernel.at_zero / denom.array()).sum();
        if (trace + 2.0 >= nd) continue;
        const Eigen::ArrayXd fitted = num.array() / denom.array();
        const double sigma2 = (sample.ys().array() - fitted).square().mean();
        const double score = std::log(sigma2) + (1.0 + trace / nd) / (1.0 - (trace + 2.0) / nd);
        if (!found || score < best_score) {
            found = true;
            best_score = score;
            best_h = h;
        }
    }
    if (!found) throw NoValidBandwidth("select_h0_aicc: every grid bandwidth was skipped");
    return Bandwidth(best_h);
}

Bandwidth select_h0_lscv(const Sample& sample, const KernelSpec& kernel,
                         const Eigen::VectorXd& grid) {
    const Eigen::Index n = sample.size();
    if (n < 3) throw std::invalid_argument("select_h0_lscv: need n >= 3");
    if (grid.size() == 0) throw NoValidBandwidth("select_h0_lscv: empty bandwidth grid");

    const std::vector<double> dist = packed_distances(sample.xs());
    const double y_bar = sample.ys().mean();

    double best_score = std::numeric_limits<double>::infinity();
    double best_h = 0.0;
    bool found = false;
    Eigen::VectorXd num, denom;
    for (Eigen::Index g = 0; g < grid.size(); ++g) {
        const double h = grid[g];
        pairwise_fit_sums(sample.xs(), sample.ys(), dist, h, kernel, num, denom);
        double score = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            // Strip the self-weight to get the leave-one-out prediction.
            const double d = denom[i] - kernel.at_zero;
            const double y = sample.ys()[i];
            if (d <= 0.0) {
                const double e = y - y_bar;
                score += e * e;
            } else {
                const double e = y - (num[i] - kernel.at_zero * y) / d;
                score += e * e;
            }
        }
        if (!found || score < best_score) {
            found = true;
            best_score = score;
            best_h = h;
        }
    }
    if (!found) throw NoValidBandwidth("select_h0_lscv: empty bandwidth grid");
    return Bandwidth(best_h);
}

Bandwidth select_density_bandwidth(const Sample& sample) {
    if (sample.size() < 2) {
        throw std::invalid_argument("select_density_bandwidth: need n >= 2");
    }
    const double sd = sample_sd(sample.xs());
    if (sd <= 0.0) {
        throw DegenerateSample("select_density_bandwidth: all predictor values equal");
    }
    std::vector<double> sorted(sample.xs().begin(), sample.xs().end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    double scale = std::min(sd, iqr / 1.34);
    if (scale <= 0.0) scale = sd;
    const auto n = static_cast<double>(sample.size());
    return Bandwidth(1.06 * scale * std::pow(n, -0.2));
}

}  // namespace binreg
