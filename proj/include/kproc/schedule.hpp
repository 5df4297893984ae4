#ifndef KPROC_SCHEDULE_HPP
#define KPROC_SCHEDULE_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace kproc {

/// c_k = alpha_k / Gamma(1 - alpha_k / alpha_{k+1}); requires
/// 0 < alpha_k < alpha_{k+1} <= 1.
double constant_c(double alpha_k, double alpha_k1);

/// The strictly increasing exponent sequence alpha_1 < ... < alpha_len.
/// Every entry lies in (0,1) except the last, which may equal 1.
///
/// Internally the schedule keeps the gaps 1 - alpha_k: exponent sequences
/// approach 1 so fast that alpha_k itself rounds to 1.0 in double precision
/// long before the gap underflows, and every formula here only needs the
/// gaps and gap differences.
class AlphaSchedule {
  public:
    static AlphaSchedule from_alphas(const std::vector<double>& alphas);
    static AlphaSchedule from_gaps(std::vector<double> gaps);

    /// Number of stored exponents (>= 2).
    std::size_t size() const { return gaps_.size(); }

    /// Deepest tree level this schedule can drive: levels 1..max_depth each
    /// need alpha_{k+1} for their intensity constant.
    std::size_t max_depth() const { return gaps_.size() - 1; }

    /// alpha_k, 1-based, k in [1, size()].
    double alpha(std::size_t k) const;

    /// 1 - alpha_k, exact as stored.
    double gap(std::size_t k) const;

    /// 1 - alpha_k / alpha_{k+1}, computed from the gaps:
    /// (gap_k - gap_{k+1}) / (1 - gap_{k+1}).
    double ratio_complement(std::size_t k) const;

    /// Intensity constant c_k for level k, k in [1, max_depth()].
    double constant_c(std::size_t k) const;

    /// First `count` exponents as a new schedule.
    AlphaSchedule truncated(std::size_t count) const;

  private:
    explicit AlphaSchedule(std::vector<double> gaps) : gaps_(std::move(gaps)) {}
    std::vector<double> gaps_;  // 1 - alpha_k, strictly decreasing, in (0,1]
};

/// A rule k -> 1 - alpha_k describing an infinite exponent sequence.
struct ScheduleFamily {
    std::string name;
    std::function<double(std::size_t)> gap;  // 1-based k
};

/// 1 - alpha_k = ratio^k  (TRIVIAL regime for any ratio in (0,1)).
ScheduleFamily geometric_gap_family(double ratio);

/// 1 - alpha_k = 2^(-2^k)  (NONTRIVIAL regime).
ScheduleFamily double_exponential_gap_family();

/// 1 - alpha_k = 1/k  (UNCOVERED regime; not a valid schedule at k = 1).
ScheduleFamily harmonic_gap_family();

/// Parse "geometric-gap r=0.5" | "double-exponential-gap" | "harmonic-gap".
ScheduleFamily parse_family(const std::string& spec);

/// Materialize alpha_1..alpha_count from a family rule. Throws if the rule
/// produces an invalid schedule in that range.
AlphaSchedule schedule_from_family(const ScheduleFamily& family, std::size_t count);

}  // namespace kproc

#endif
