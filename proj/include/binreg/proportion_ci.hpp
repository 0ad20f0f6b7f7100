#pragma once

#include <cmath>

#include "binreg/interval.hpp"
#include "binreg/math.hpp"

namespace binreg {

// Wald interval p_hat +/- z * sqrt(p_hat (1-p_hat) / n). Degenerate [0,0]
// and [1,1] intervals are returned as-is; that collapse is exactly the
// pathology the alternatives below avoid.
inline IntervalEstimate wald_prop(const BinomialCount& count, double alpha) {
    check_alpha(alpha);
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    const double n = static_cast<double>(count.trials);
    const double p_hat = static_cast<double>(count.successes) / n;
    return detail::finalize(detail::wald_raw(p_hat, n, z), IntervalMethod::Wald,
                            IntervalScope::Classical, 1.0 - alpha);
}

// Wilson (score) interval, obtained by inverting the score test.
inline IntervalEstimate wilson_prop(const BinomialCount& count, double alpha) {
    check_alpha(alpha);
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    const double n = static_cast<double>(count.trials);
    const double p_hat = static_cast<double>(count.successes) / n;
    return detail::finalize(detail::wilson_raw(p_hat, n, z), IntervalMethod::Wilson,
                            IntervalScope::Classical, 1.0 - alpha);
}

// Agresti-Coull interval: Wald recipe applied to the pseudo-counts
// (successes + z^2/2, trials + z^2).
inline IntervalEstimate agresti_coull_prop(const BinomialCount& count, double alpha) {
    check_alpha(alpha);
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    const double n = static_cast<double>(count.trials);
    const double p_hat = static_cast<double>(count.successes) / n;
    return detail::finalize(detail::agresti_coull_raw(p_hat, n, z), IntervalMethod::AgrestiCoull,
                            IntervalScope::Classical, 1.0 - alpha);
}

// Expectation of the studentized proportion pivot to order n^(-3/2). Nonzero
// away from p = 1/2; the systematic coverage bias of the Wald interval comes
// from this term.
inline double wald_bias_term(double p, long n) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("wald_bias_term: need 0 < p < 1");
    if (n < 1) throw std::invalid_argument("wald_bias_term: n must be positive");
    const auto nn = static_cast<double>(n);
    const double centered = p - 0.5;
    const double variance = nn * p * (1.0 - p);
    return (centered / std::sqrt(variance)) *
           (1.0 + 3.5 / nn + 4.5 * centered * centered / variance);
}

}  // namespace binreg
