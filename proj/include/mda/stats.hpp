#pragma once

// Tail-probability primitives shared by the inference code. Implemented
// directly (series / continued fractions, Numerical-Recipes-style) so that
// p-values are reproducible bit-for-bit across platforms; absolute error
// is below 1e-10 over the ranges used here.

namespace mda::stats {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double reg_gamma_lower(double a, double x);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double reg_beta(double a, double b, double x);

// Standard normal CDF and two-sided tail 2 * (1 - Phi(|z|)).
double normal_cdf(double z);
double normal_two_sided_p(double z);

// Inverse standard normal CDF (Acklam's rational approximation refined by
// one Halley step); |error| < 1e-12 for p in (0, 1).
double normal_quantile(double p);

// Student-t two-sided tail for statistic t with (possibly fractional) df.
double t_two_sided_p(double t, double df);

// Chi-square upper tail P(X >= x) with df degrees of freedom.
double chi2_sf(double x, double df);

}  // namespace mda::stats
