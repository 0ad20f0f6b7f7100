#pragma once

#include "binreg/errors.hpp"
#include "binreg/interval.hpp"
#include "binreg/math.hpp"
#include "binreg/smoothing.hpp"

namespace binreg {

// The two local quantities every conditional interval is built from: the
// Nadaraya-Watson estimate and the local equivalent sample size
// n*h*f_hat(x)/R(K), bundled with where and how they were computed.
struct ConditionalPoint {
    double x;
    double p_hat;   // in [0,1]
    double n_eff;   // >= 0
    Bandwidth h;
};

inline ConditionalPoint conditional_point(const Sample& sample, double x, Bandwidth h,
                                          const KernelSpec& kernel) {
    return {x, nw_at(sample, x, h, kernel), effective_sample_size(sample, x, h, kernel), h};
}

namespace detail {
inline double require_n_eff(const ConditionalPoint& pt) {
    if (!(pt.n_eff > 0.0)) {
        throw ZeroEffectiveSample("conditional interval: zero local equivalent sample size");
    }
    return pt.n_eff;
}
}  // namespace detail

// Conditional Wald interval: the classical recipe with the local equivalent
// sample size in place of n. Same pattern for Wilson and Agresti-Coull; the
// three share the classical cores, with fractional trial counts allowed.
inline IntervalEstimate wald_cond(const ConditionalPoint& pt, double alpha) {
    check_alpha(alpha);
    const double n_eff = detail::require_n_eff(pt);
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    return detail::finalize(detail::wald_raw(pt.p_hat, n_eff, z), IntervalMethod::Wald,
                            IntervalScope::Conditional, 1.0 - alpha);
}

inline IntervalEstimate wilson_cond(const ConditionalPoint& pt, double alpha) {
    check_alpha(alpha);
    const double n_eff = detail::require_n_eff(pt);
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    return detail::finalize(detail::wilson_raw(pt.p_hat, n_eff, z), IntervalMethod::Wilson,
                            IntervalScope::Conditional, 1.0 - alpha);
}

inline IntervalEstimate agresti_coull_cond(const ConditionalPoint& pt, double alpha) {
    check_alpha(alpha);
    const double n_eff = detail::require_n_eff(pt);
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    return detail::finalize(detail::agresti_coull_raw(pt.p_hat, n_eff, z),
                            IntervalMethod::AgrestiCoull, IntervalScope::Conditional,
                            1.0 - alpha);
}

inline IntervalEstimate conditional_interval(IntervalMethod method, const ConditionalPoint& pt,
                                             double alpha) {
    switch (method) {
        case IntervalMethod::Wald: return wald_cond(pt, alpha);
        case IntervalMethod::Wilson: return wilson_cond(pt, alpha);
        case IntervalMethod::AgrestiCoull: return agresti_coull_cond(pt, alpha);
    }
    throw std::logic_error("conditional_interval: unknown method");
}

}  // namespace binreg
