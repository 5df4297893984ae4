#ifndef KPROC_STATS_HPP
#define KPROC_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace kproc {

/// Monte Carlo estimate: sample mean, standard error of the mean, count.
struct StatEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replicas = 0;
};

StatEstimate estimate_from_samples(std::span<const double> samples);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

/// Oracle-versus-simulation comparison. Passes when the oracle lies within
/// `z_threshold` standard errors plus the truncation half-width of the
/// observed mean; when the half-width dominates the statistical tolerance
/// the comparison cannot conclude and is flagged instead of failed.
struct ComparisonResult {
    std::string name;
    StatEstimate observed;
    double expected = 0.0;
    double z_score = 0.0;
    double truncation_halfwidth = 0.0;
    double z_threshold = 3.0;
    Verdict verdict = Verdict::Inconclusive;
    bool passed() const { return verdict != Verdict::Fail; }
};

ComparisonResult compare_to_oracle(std::string name, const StatEstimate& observed,
                                   double expected, double truncation_halfwidth = 0.0,
                                   double z_threshold = 3.0);

/// Two-sample Kolmogorov-Smirnov test; returns the asymptotic p-value of
/// the observed statistic.
double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b);

/// Run `count` independent replicas of a double-valued experiment over
/// `workers` threads. Results are folded in replicate order, so the
/// estimate does not depend on the worker count.
StatEstimate run_replicas(std::size_t count, std::size_t workers,
                          const std::function<double(std::size_t)>& replica);

/// Same, collecting all samples.
std::vector<double> collect_replicas(std::size_t count, std::size_t workers,
                                     const std::function<double(std::size_t)>& replica);

/// Vector-valued variant: replica i fills row i of the result.
std::vector<std::vector<double>> collect_replica_rows(
    std::size_t count, std::size_t workers,
    const std::function<std::vector<double>(std::size_t)>& replica);

double median_of(std::vector<double> values);

}  // namespace kproc

#endif
