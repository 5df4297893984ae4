#ifndef KPROC_STABLE_HPP
#define KPROC_STABLE_HPP

#include "kproc/rng.hpp"

namespace kproc {

/// One draw of the one-sided alpha-stable law normalized so that
/// E exp(-lambda X) = exp(-lambda^alpha), 0 < alpha <= 1.
/// alpha = 1 is the degenerate law concentrated at 1.
///
/// Uses Kanter's representation: with U uniform on (0, pi) and E a unit
/// exponential,
///   X = sin(alpha U) * sin((1-alpha) U)^((1-alpha)/alpha)
///       / ( sin(U)^(1/alpha) * E^((1-alpha)/alpha) ).
double sample_stable(double alpha, Stream& stream);

}  // namespace kproc

#endif
