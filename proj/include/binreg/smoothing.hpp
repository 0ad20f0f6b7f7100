#pragma once

#include <Eigen/Core>

#include "binreg/kernel.hpp"
#include "binreg/sample.hpp"

namespace binreg {

// Kernel weights smaller than this are treated as exactly zero. Without the
// cutoff, IEEE underflow would turn a far-away evaluation point into a
// silent 0/0 instead of a NoLocalData error.
constexpr double weight_underflow = 1e-300;

// K((x - X_i)/h) for every design point, underflow-guarded.
Eigen::VectorXd kernel_weights(const Eigen::VectorXd& xs, double x, Bandwidth h,
                               const KernelSpec& kernel);

// Kernel density estimate (1/(nh)) * sum_i K((x - X_i)/h).
double kde_at(const Sample& sample, double x, Bandwidth h, const KernelSpec& kernel);

// Nadaraya-Watson estimate: kernel-weighted average of the responses.
// Throws NoLocalData when every weight underflows.
double nw_at(const Sample& sample, double x, Bandwidth h, const KernelSpec& kernel);

// Local equivalent sample size sum_i K((x - X_i)/h) / R(K); equals
// n*h*kde_at(x)/R(K) by construction.
double effective_sample_size(const Sample& sample, double x, Bandwidth h,
                             const KernelSpec& kernel);

// Leave-in Nadaraya-Watson fit at every design point. The denominator at X_i
// always contains the K(0) self-weight, so this never raises NoLocalData.
Eigen::VectorXd nw_fitted(const Sample& sample, Bandwidth h, const KernelSpec& kernel);

// Default pilot search grid: 100 log-spaced bandwidths on
// [0.05*sd(xs), 5*sd(xs)]. Throws DegenerateSample when sd(xs) = 0.
Eigen::VectorXd default_pilot_grid(const Sample& sample);

// Corrected-AIC bandwidth selection for the Nadaraya-Watson smoother.
// Score: log(sigma2_h) + (1 + tr(H_h)/n) / (1 - (tr(H_h)+2)/n), where
// sigma2_h is the mean squared residual of the leave-in fit and tr(H_h) the
// smoother trace. Grid points with tr(H_h)+2 >= n are skipped; score ties
// break to the smaller bandwidth. Throws NoValidBandwidth when every grid
// point is skipped.
Bandwidth select_h0_aicc(const Sample& sample, const KernelSpec& kernel,
                         const Eigen::VectorXd& grid);

// Leave-one-out least-squares cross-validation. Observations whose
// leave-one-out denominator vanishes contribute (Y_i - mean(Y))^2.
Bandwidth select_h0_lscv(const Sample& sample, const KernelSpec& kernel,
                         const Eigen::VectorXd& grid);

// Normal-reference bandwidth for density estimation:
// 1.06 * min(sd, IQR/1.34) * n^(-1/5). Falls back to sd when the IQR is zero.
// Throws DegenerateSample when all predictor values are equal.
Bandwidth select_density_bandwidth(const Sample& sample);

}  // namespace binreg
