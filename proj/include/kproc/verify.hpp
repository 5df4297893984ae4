#ifndef KPROC_VERIFY_HPP
#define KPROC_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kproc/analytics.hpp"
#include "kproc/clocks.hpp"
#include "kproc/environment.hpp"
#include "kproc/stats.hpp"

namespace kproc {

struct HarnessConfig {
    SeedPlan plan;
    std::size_t workers = 1;
    double z_threshold = 3.0;
};

/// Campbell-exact Laplace exponent of the discarded part of the cylinder
/// sum  sum_{y|_k in [base]_k} gbar_k(y)/gbar(base)  at transform point
/// lambda, conditional on the retained marks. Multiplying
/// exp(-lambda * retained sum) by exp(-this) gives an unbiased estimator of
/// the untruncated Laplace functional.
double cylinder_completion_exponent(const Environment& env, const NodePath& base,
                                    std::size_t k, double lambda);

/// Same for the power sum  sum_{y|_n} gbar_n(y)^(alpha_{n+1})  at lambda.
double power_sum_completion_exponent(const Environment& env, std::size_t n,
                                     double lambda);

/// Conditional clock Laplace (one result per lambda). For k = 1 the oracle
/// is exp(-t * nested_h(root)); for k > 1 the paired difference between the
/// simulated transform and the local-time-weighted exponent is compared
/// against zero.
std::vector<ComparisonResult> check_conditional_laplace(
    const Environment& env, std::size_t k, std::size_t n, double t,
    std::span<const double> lambdas, std::size_t replicas, const HarnessConfig& cfg);

/// Environment cylinder-sum Laplace against the closed form; emits a raw
/// (retained-marks, half-width) row and a completion-corrected row per
/// lambda.
std::vector<ComparisonResult> check_environment_laplace(
    const AlphaSchedule& schedule, std::size_t j, std::size_t k,
    std::span<const double> lambdas, std::size_t env_replicas, std::size_t breadth,
    const HarnessConfig& cfg);

/// Constancy in n of E exp(-sum gbar_n^(alpha_{n+1})) = e^-1; raw and
/// completed rows per depth.
std::vector<ComparisonResult> check_z_martingale(const AlphaSchedule& schedule,
                                                 std::span<const std::size_t> depths,
                                                 std::size_t replicas, std::size_t breadth,
                                                 const HarnessConfig& cfg);

/// Empirical Laplace transform of estimate_W at the root against
/// exp(-lambda^{alpha_1}); raw and completed rows per lambda.
std::vector<ComparisonResult> check_w_estimate_laplace(
    const AlphaSchedule& schedule, std::size_t depth, std::span<const double> lambdas,
    std::size_t env_replicas, std::size_t breadth, const HarnessConfig& cfg);

/// Stable sampler: empirical Laplace transform on a lambda grid plus one
/// fractional moment.
std::vector<ComparisonResult> check_stable_sampler(double alpha,
                                                   std::span<const double> lambdas,
                                                   double moment_beta,
                                                   std::size_t replicas,
                                                   const HarnessConfig& cfg);

/// W composition law: direct W(x|_k) draws versus the truncated mark-sum
/// composition at breadth M and 2M (common random numbers), on a lambda
/// grid.
struct WCompositionReport {
    std::vector<ComparisonResult> results;       ///< per lambda: direct vs composed(M)
    std::vector<double> discrepancy_m;           ///< |mean gap| at M
    std::vector<double> discrepancy_2m;          ///< |mean gap| at 2M
    bool discrepancy_shrinks = false;
};
WCompositionReport check_w_composition(const AlphaSchedule& schedule, std::size_t k,
                                       std::span<const double> lambdas,
                                       std::size_t replicas, std::size_t breadth,
                                       const HarnessConfig& cfg);

/// Subordinator identity at k = 1: mean of theta_1^n(1) against the
/// retained gbar sum, plus a two-sample distribution-equality test of
/// increments over disjoint unit windows.
struct SubordinatorReport {
    ComparisonResult mean_result;
    double ks_pvalue = 0.0;
    bool increments_stationary = false;  ///< p >= significance
};
SubordinatorReport check_subordinator(const Environment& env, std::size_t n,
                                      std::size_t replicas, const HarnessConfig& cfg,
                                      double significance = 0.01);

/// Adjusted-clock mean: MC mean of adjusted theta_1^n(1) against the
/// composition-law estimate of W at the root implied by the same fixed W
/// factors.
ComparisonResult check_adjusted_mean(const Environment& env, std::size_t n,
                                     WeightConfig weights, std::size_t replicas,
                                     const HarnessConfig& cfg);

/// Martingale increment: with levels <= n shared, the mean of
/// adjusted theta_1^(n+1)(t) - adjusted theta_1^n(t) over dynamics replicas.
ComparisonResult check_martingale_increment(const Environment& env, std::size_t n,
                                            double t, WeightConfig weights,
                                            std::size_t replicas, const HarnessConfig& cfg);

/// Coupled convergence diagnostics across depths n_list (all sharing
/// low-level randomness): sup-gaps between successive adjusted clocks and
/// between each clock and its adjustment.
struct ClockConvergenceReport {
    std::vector<std::size_t> n_list;
    std::vector<double> median_coupled_gap;     ///< size n_list.size()-1
    std::vector<double> median_adjustment_gap;  ///< size n_list.size()
    bool coupled_gaps_decreasing = false;
    bool adjustment_gaps_decreasing = false;
};
ClockConvergenceReport check_clock_convergence(const Environment& env, std::size_t k,
                                               std::span<const std::size_t> n_list,
                                               std::span<const double> t_grid,
                                               std::size_t replicas, WeightConfig weights,
                                               const HarnessConfig& cfg);

/// Occupation fractions of the given cylinders against pi_formula.
std::vector<ComparisonResult> check_occupation(const Environment& env, std::size_t depth,
                                               std::span<const NodePath> cylinders,
                                               double horizon, std::size_t replicas,
                                               const HarnessConfig& cfg);

/// Exit-cycle expectations for one cylinder: sojourns V-U and gaps U'-V
/// against the finite-depth formulas. Also reports the observed complete
/// cycle count per replica.
struct CycleReport {
    ComparisonResult sojourn_result;
    ComparisonResult gap_result;
    std::size_t min_cycles = 0;
};
CycleReport check_cycles(const Environment& env, std::size_t depth,
                         const NodePath& cylinder, double horizon, std::size_t replicas,
                         const HarnessConfig& cfg);

/// One row per comparison: name observed se oracle z halfwidth verdict.
void write_report_table(std::ostream& out, std::span<const ComparisonResult> rows);

}  // namespace kproc

#endif
