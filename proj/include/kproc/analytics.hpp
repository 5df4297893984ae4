#ifndef KPROC_ANALYTICS_HPP
#define KPROC_ANALYTICS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kproc/environment.hpp"
#include "kproc/schedule.hpp"

namespace kproc {

/// Law with Laplace transform E e^(-lambda X) = e^(-c lambda^alpha).
struct StableLaw {
    double c = 1.0;
    double alpha = 0.5;
};

/// E(X^beta) = c^(beta/alpha) Gamma(1 - beta/alpha) / Gamma(1 - beta), for
/// 0 < beta < alpha. Diverges at beta >= alpha.
double stable_moment(const StableLaw& law, double beta);

/// Laplace transform of the cylinder sum
/// sum_{y|_k in [x|_j]_k} gbar_k(y)/gbar_j(y) :
///   exp{ -[Gamma(1-a_k)/Gamma(1-a_k/a_{k+1})]^(a_{j+1}/a_k) * lambda^(a_{j+1}) }.
double cylinder_sum_laplace(const AlphaSchedule& schedule, std::size_t j, std::size_t k,
                            double lambda);

/// Per-mark Laplace-exponent kernel h(gamma, z) = z*gamma / (1 + z*gamma).
double h_kernel(double gamma, double z);

/// Bottom-up evaluation of the nested conditional Laplace exponent over the
/// retained tree. For each depth-(from_level - 1) node x returns
///   sum_{x_l} h(gamma_l(..), sum_{...} h(..., leaf_value) ...)
/// with l = from_level and leaf_value = lambda * leaf_weight at depth n.
/// `halfwidths` bounds the contribution the discarded marks would add.
struct NestedHResult {
    std::size_t node_depth = 0;            ///< from_level - 1
    std::vector<double> exponents;         ///< flat-indexed over depth-k nodes
    std::vector<double> halfwidths;        ///< same indexing
};
NestedHResult nested_h_exponent(const Environment& env, std::size_t from_level,
                                double lambda,
                                std::span<const double> leaf_weights = {});

/// d_i = alpha_i Gamma(alpha_i) Gamma(1-alpha_i) / Gamma(1-alpha_i/alpha_{i+1}),
/// for i = 1..size-1; every entry lies in (0,1).
std::vector<double> d_sequence(const AlphaSchedule& schedule);

/// Upper-bound recursion for the mean nested exponent, indices k = 0..n:
///   a_n = lambda^{a_n} Gamma(1-a_n/a_{n+1}) / Gamma(1-a_n)
///   a_{n-1} = lambda^{a_n} a_n Gamma(a_n)          (exact step)
///   a_{k-1} = (a_k)^{alpha_k} d_k                  (Jensen step, k < n)
/// Returned vector is indexed by k (a[k] = a_k^n).
std::vector<double> a_upper_recursion(const AlphaSchedule& schedule, std::size_t n,
                                      double lambda);

/// Lower-bound recursion for the alpha_k-th moments of the nested exponent:
///   a_n = lambda^{a_n} Gamma(1-a_n/a_{n+1}) / Gamma(1-a_n)
///   a_{k-1} = a_k (1+delta)^{-(1-alpha_{k-1})} d_k,   delta = max(lambda, 1),
/// whose closed form at level k multiplies the base by
/// (1+delta)^{-sum_{j=k}^{n-1}(1-alpha_j)} prod_{j=k+1}^n d_j.
std::vector<double> a_lower_recursion(const AlphaSchedule& schedule, std::size_t n,
                                      double lambda);

enum class SeriesVerdict { Convergent, Divergent, Indeterminate };

enum class Regime { Nontrivial, Trivial, Uncovered, Indeterminate };

std::string to_string(Regime r);
std::string to_string(SeriesVerdict v);

struct RegimeReport {
    Regime classification = Regime::Indeterminate;
    SeriesVerdict ratio_verdict = SeriesVerdict::Indeterminate;  ///< sum (1-a_{k+1})/(1-a_k)
    SeriesVerdict gap_verdict = SeriesVerdict::Indeterminate;    ///< sum (1-a_k)
    std::vector<double> ratio_partial_sums;
    std::vector<double> gap_partial_sums;
    std::vector<double> d_values;
    std::vector<double> b_products;  ///< running product of b_i = d_i^(a_1...a_{i-1})
    std::size_t horizon = 0;
    std::string family;
};

struct SeriesThresholds {
    double tail_tolerance = 1e-12;   ///< increment below this counts toward convergence
    std::size_t quiet_terms = 10;    ///< consecutive small increments required
    double divergence_sum = 1e3;     ///< partial sum above this means divergence
    double harmonic_floor = 1e-3;    ///< k*a_k >= floor over the tail half also means divergence
};

/// Numeric convergence/divergence decision for a positive-term series given
/// its first K terms.
SeriesVerdict analyze_series(std::span<const double> terms, const SeriesThresholds& thr = {});

/// Classify a schedule family by the limit-clock dichotomy, evaluated
/// numerically over k = 1..horizon: convergent gap-ratio sums give
/// nontrivial limits, divergent ones with summable gaps give trivial
/// limits, and divergent gap sums fall outside both regimes.
RegimeReport classify_schedule(const ScheduleFamily& family, std::size_t horizon,
                               const SeriesThresholds& thr = {});

void write_regime_report(std::ostream& out, const RegimeReport& report);

}  // namespace kproc

#endif
