#ifndef ICEBREAKER_DISTRIBUTIONS_HPP
#define ICEBREAKER_DISTRIBUTIONS_HPP

#include <cstddef>
#include <vector>

namespace icebreaker {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (Wichura's PPND16 rational approximation).
/// Accurate to ~1e-15 for p in (0,1); throws outside.
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Upper tail of the chi-squared distribution with dof degrees of freedom.
double chi2_sf(double x, double dof);

/// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);

/// log of the unregularized incomplete beta integral
/// B_x(a, b) = ∫_0^x t^(a-1) (1-t)^(b-1) dt, for a, b > 0, x in [0, 1].
double log_inc_beta(double a, double b, double x);

/// Linear-interpolation quantile (R type 7). p in [0,1]; draws need not be sorted.
double quantile_type7(std::vector<double> draws, double p);

double median(std::vector<double> draws);

} // namespace icebreaker

#endif
