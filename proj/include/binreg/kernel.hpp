#pragma once

#include <cmath>

namespace binreg {

// A smoothing kernel bundled with the analytic constants the interval
// formulas need. The constants are stored rather than recomputed: they sit
// in the innermost loops of the bootstrap and the simulation harness.
struct KernelSpec {
    using EvalFn = double (*)(double);

    EvalFn evaluate;       // K(u), a symmetric nonnegative density
    double roughness;      // R(K) = integral of K^2
    double second_moment;  // mu2(K) = integral of u^2 K(u)
    double at_zero;        // K(0)
    const char* name;
};

namespace detail {
inline double standard_normal_density(double u) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * u * u);
}
}  // namespace detail

// Standard Gaussian kernel: R(K) = 1/(2*sqrt(pi)), mu2 = 1, K(0) = 1/sqrt(2*pi).
inline KernelSpec gaussian_kernel() {
    constexpr double inv_two_sqrt_pi = 0.2820947917738781434740397;
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    return {&detail::standard_normal_density, inv_two_sqrt_pi, 1.0, inv_sqrt_2pi, "gaussian"};
}

}  // namespace binreg
