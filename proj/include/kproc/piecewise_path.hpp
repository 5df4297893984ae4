#ifndef KPROC_PIECEWISE_PATH_HPP
#define KPROC_PIECEWISE_PATH_HPP

#include <cstddef>
#include <limits>
#include <vector>

namespace kproc {

/// Right-continuous nondecreasing step function started at 0: jump times
/// strictly increasing, jump sizes strictly positive. `horizon` marks the
/// internal-time extent over which the path is known; evaluation past it is
/// the caller's business, inversion past the known mass is an error.
class PiecewisePath {
  public:
    PiecewisePath() = default;

    static PiecewisePath from_jumps(std::vector<double> times, std::vector<double> sizes,
                                    double horizon = std::numeric_limits<double>::infinity());

    /// value(t) = sum of sizes with jump_time <= t.
    double value(double t) const;

    /// left limit: sum of sizes with jump_time < t.
    double left_limit(double t) const;

    /// Generalized inverse inf{r >= 0 : value(r) > s}; always one of the
    /// jump times. Throws HorizonExceeded for s >= total_mass().
    double inverse(double s) const;

    double total_mass() const { return cum_.empty() ? 0.0 : cum_.back(); }
    double horizon() const { return horizon_; }
    std::size_t jump_count() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

    double jump_time(std::size_t i) const { return times_[i]; }
    double jump_size(std::size_t i) const { return i == 0 ? cum_[0] : cum_[i] - cum_[i - 1]; }
    double cumulative(std::size_t i) const { return cum_[i]; }

    /// Restriction to jump times <= t_max, horizon clipped accordingly.
    PiecewisePath clipped(double t_max) const;

  private:
    std::vector<double> times_;
    std::vector<double> cum_;
    double horizon_ = std::numeric_limits<double>::infinity();
};

/// The composition t -> outer(inner(t)). Jump times of the result are jump
/// times of the inner path. Requires inner's value range to stay within
/// outer's known horizon; throws HorizonExceeded otherwise.
PiecewisePath compose(const PiecewisePath& outer, const PiecewisePath& inner);

}  // namespace kproc

#endif
