#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "binreg/math.hpp"

namespace binreg {

enum class IntervalMethod { Wald, Wilson, AgrestiCoull };

// Whether the interval targets an unconditional proportion or a conditional
// probability p(x) estimated by kernel regression.
enum class IntervalScope { Classical, Conditional };

inline const char* method_token(IntervalMethod m) {
    switch (m) {
        case IntervalMethod::Wald: return "wald";
        case IntervalMethod::Wilson: return "wilson";
        case IntervalMethod::AgrestiCoull: return "ac";
    }
    return "?";
}

// A confidence interval truncated to [0,1]. `truncated` records whether the
// raw bounds actually spilled outside the unit interval.
struct IntervalEstimate {
    double lower;
    double upper;
    double center;
    IntervalMethod method;
    IntervalScope scope;
    double level;  // 1 - alpha
    bool truncated;
};

struct BinomialCount {
    BinomialCount(long successes_, long trials_) : successes(successes_), trials(trials_) {
        if (trials < 1) throw std::invalid_argument("BinomialCount: trials must be positive");
        if (successes < 0 || successes > trials) {
            throw std::invalid_argument("BinomialCount: need 0 <= successes <= trials");
        }
    }

    long successes;
    long trials;
};

inline double check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
    }
    return alpha;
}

namespace detail {

// The three interval recipes on a (possibly fractional) trial count. Both
// the classical and the conditional constructors run through these; the
// conditional case substitutes the local equivalent sample size for n.
struct RawInterval {
    double lower;
    double upper;
    double center;
};

inline RawInterval wald_raw(double p_hat, double n, double z) {
    const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n);
    return {p_hat - half, p_hat + half, p_hat};
}

inline RawInterval wilson_raw(double p_hat, double n, double z) {
    const double z2 = z * z;
    const double center = (p_hat * n + 0.5 * z2) / (n + z2);
    const double half =
        (std::sqrt(n) * z / (n + z2)) * std::sqrt(p_hat * (1.0 - p_hat) + z2 / (4.0 * n));
    return {center - half, center + half, center};
}

inline RawInterval agresti_coull_raw(double p_hat, double n, double z) {
    const double z2 = z * z;
    const double n_adj = n + z2;
    const double p_adj = (p_hat * n + 0.5 * z2) / n_adj;
    const double half = z * std::sqrt(p_adj * (1.0 - p_adj) / n_adj);
    return {p_adj - half, p_adj + half, p_adj};
}

inline RawInterval raw_interval(IntervalMethod method, double p_hat, double n, double z) {
    switch (method) {
        case IntervalMethod::Wald: return wald_raw(p_hat, n, z);
        case IntervalMethod::Wilson: return wilson_raw(p_hat, n, z);
        case IntervalMethod::AgrestiCoull: return agresti_coull_raw(p_hat, n, z);
    }
    throw std::logic_error("raw_interval: unknown method");
}

// Clamp to [0,1]. Spill below round-off scale does not count as truncation,
// so e.g. an all-successes Wilson upper bound of 1 + 1ulp stays untruncated.
inline IntervalEstimate finalize(const RawInterval& raw, IntervalMethod method,
                                 IntervalScope scope, double level) {
    constexpr double clip_tol = 1e-12;
    const bool clipped = raw.lower < -clip_tol || raw.upper > 1.0 + clip_tol;
    return {std::clamp(raw.lower, 0.0, 1.0),
            std::clamp(raw.upper, 0.0, 1.0),
            std::clamp(raw.center, 0.0, 1.0),
            method,
            scope,
            level,
            clipped};
}

}  // namespace detail

}  // namespace binreg
