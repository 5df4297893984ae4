#include "kproc/piecewise_path.hpp"

#include <algorithm>
#include <stdexcept>

#include "kproc/errors.hpp"

namespace kproc {

PiecewisePath PiecewisePath::from_jumps(std::vector<double> times, std::vector<double> sizes,
                                        double horizon) {
    if (times.size() != sizes.size())
        throw std::invalid_argument("PiecewisePath: times/sizes length mismatch");
    PiecewisePath path;
    path.times_ = std::move(times);
    path.cum_.resize(path.times_.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < path.times_.size(); ++i) {
        if (path.times_[i] < 0.0)
            throw std::invalid_argument("PiecewisePath: negative jump time");
        if (i > 0 && !(path.times_[i] > path.times_[i - 1]))
            throw std::invalid_argument("PiecewisePath: jump times must be strictly increasing");
        if (!(sizes[i] > 0.0))
            throw std::invalid_argument("PiecewisePath: jump sizes must be positive");
        cum += sizes[i];
        path.cum_[i] = cum;
    }
    if (!path.times_.empty() && horizon < path.times_.back())
        throw std::invalid_argument("PiecewisePath: horizon before last jump");
    path.horizon_ = horizon;
    return path;
}

double PiecewisePath::value(double t) const {
    // index of last jump with time <= t
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double PiecewisePath::left_limit(double t) const {
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double PiecewisePath::inverse(double s) const {
    if (s < 0.0) throw std::domain_error("PiecewisePath::inverse: s >= 0");
    if (s >= total_mass())
        throw HorizonExceeded("PiecewisePath::inverse: s beyond simulated mass");
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    return times_[static_cast<std::size_t>(it - cum_.begin())];
}

PiecewisePath PiecewisePath::clipped(double t_max) const {
    PiecewisePath out;
    const auto it = std::upper_bound(times_.begin(), times_.end(), t_max);
    const std::size_t n = static_cast<std::size_t>(it - times_.begin());
    out.times_.assign(times_.begin(), times_.begin() + n);
    out.cum_.assign(cum_.begin(), cum_.begin() + n);
    out.horizon_ = std::min(horizon_, t_max);
    return out;
}

PiecewisePath compose(const PiecewisePath& outer, const PiecewisePath& inner) {
    if (inner.total_mass() > outer.horizon())
        throw HorizonExceeded("compose: inner path exits the outer path's known domain");
    PiecewisePath out;
    std::vector<double> times, sizes;
    times.reserve(inner.jump_count() + 1);
    sizes.reserve(inner.jump_count() + 1);
    double prev = 0.0;
    const double base = outer.value(0.0);
    if (base > 0.0 && (inner.empty() || inner.jump_time(0) > 0.0)) {
        // outer already carries mass at the inner baseline
        times.push_back(0.0);
        sizes.push_back(base);
        prev = base;
    }
    for (std::size_t i = 0; i < inner.jump_count(); ++i) {
        const double v = outer.value(inner.cumulative(i));
        if (v > prev) {
            times.push_back(inner.jump_time(i));
            sizes.push_back(v - prev);
            prev = v;
        }
    }
    return PiecewisePath::from_jumps(std::move(times), std::move(sizes), inner.horizon());
}

}  // namespace kproc
