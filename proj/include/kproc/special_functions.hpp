#ifndef KPROC_SPECIAL_FUNCTIONS_HPP
#define KPROC_SPECIAL_FUNCTIONS_HPP

#include <cstddef>

namespace kproc {

/// Gamma function via a Lanczos approximation (g = 7, 9 coefficients),
/// reflection formula for x < 0.5. Relative accuracy better than 1e-13
/// over the range used here. Throws std::domain_error at poles
/// (nonpositive integers).
double gamma_fn(double x);

/// log Gamma for x > 0.
double log_gamma_fn(double x);

/// Lower incomplete gamma  gamma(s, x) = int_0^x t^(s-1) e^(-t) dt,  s > 0, x >= 0.
/// Series for x < s + 1, continued fraction otherwise.
double lower_incomplete_gamma(double s, double x);

/// Regularized P(s, x) = gamma(s, x) / Gamma(s).
double regularized_gamma_p(double s, double x);

/// J(q, S) = int_0^S (1 - e^-s) s^(-q-1) ds  for 0 < q < 1, S >= 0.
/// Equals  -(1 - e^-S) S^-q / q + gamma(1-q, S) / q.
double one_minus_exp_power_integral(double q, double s_max);

/// Expected Laplace exponent of the discarded part of a Poisson point
/// process below a cutoff:
///
///   int_0^cutoff (1 - exp(-(a t)^beta)) * c t^(-1-alpha) dt,
///
/// for 0 < alpha < beta and a, cutoff >= 0. This is the Campbell-theorem
/// exponent of E exp(-sum_i (a t_i)^beta * V_i) over marks t_i below the
/// cutoff when each independent factor V_i has Laplace transform
/// exp(-u^beta')-style laws folded into a and beta by the caller.
double ppp_truncated_exp_integral(double c, double alpha, double cutoff,
                                  double a, double beta);

}  // namespace kproc

#endif
