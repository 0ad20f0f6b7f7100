#pragma once

namespace binreg {

// Standard normal density.
double normal_pdf(double x);

// Standard normal distribution function, computed through erfc.
double normal_cdf(double x);

// Standard normal quantile. Rational approximation refined by one Halley
// step against normal_cdf; absolute error well below 1e-10 on (0,1).
// Throws std::domain_error for p outside (0,1).
double normal_quantile(double p);

// Upper-tail probability P(X > x) for a chi-squared variable with dof
// degrees of freedom, via the regularized incomplete gamma function.
double chi_squared_upper_tail(double x, double dof);

}  // namespace binreg
