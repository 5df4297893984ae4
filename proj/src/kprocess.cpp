#include "kproc/kprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "kproc/errors.hpp"
#include "kproc/stable.hpp"

namespace kproc {

Trajectory::Trajectory(std::size_t depth, std::size_t breadth,
                       std::vector<Segment> segments, double horizon)
    : depth_(depth), breadth_(breadth), horizon_(horizon), segments_(std::move(segments)) {
    double t = 0.0;
    ends_.reserve(segments_.size());
    for (const Segment& s : segments_) {
        if (!(s.start == t && s.end > s.start))
            throw std::invalid_argument("Trajectory: segments must tile [0, horizon]");
        t = s.end;
        ends_.push_back(s.end);
    }
    if (!segments_.empty() && segments_.back().end < horizon)
        throw std::invalid_argument("Trajectory: segments stop short of the horizon");
}

std::uint64_t Trajectory::state_index_at(double t) const {
    if (t < 0.0 || t >= horizon_)
        throw std::out_of_range("Trajectory::state_index_at: t outside [0, horizon)");
    const auto it = std::upper_bound(ends_.begin(), ends_.end(), t);
    return segments_[static_cast<std::size_t>(it - ends_.begin())].state;
}

std::uint64_t Trajectory::prefix_index(std::uint64_t state, std::size_t k) const {
    for (std::size_t j = k; j < depth_; ++j) state /= breadth_;
    return state;
}

State Trajectory::decode(std::uint64_t state) const {
    State s;
    s.coords.resize(depth_);
    for (std::size_t j = depth_; j-- > 0;) {
        s.coords[j] = static_cast<std::uint32_t>(state % breadth_) + 1u;
        state /= breadth_;
    }
    return s;
}

State Trajectory::state_at(double t) const { return decode(state_index_at(t)); }

KProcessRealization simulate_k_process(const Environment& env, std::size_t depth,
                                       double horizon, const SeedPlan& plan,
                                       std::uint64_t replicate, std::size_t event_budget) {
    if (depth < 1 || depth > env.depth())
        throw std::invalid_argument("simulate_k_process: depth in [1, env depth]");
    ClockHierarchy hier(env, depth, plan, replicate, WeightConfig{}, event_budget);
    Trajectory traj = extract_trajectory(hier, depth, horizon);
    std::vector<PiecewisePath> clocks;
    clocks.reserve(depth);
    for (std::size_t j = 1; j <= depth; ++j) clocks.push_back(hier.clock(j));
    return {std::move(traj), std::move(clocks)};
}

Trajectory extract_trajectory(ClockHierarchy& hier, std::size_t level, double horizon) {
    std::vector<Trajectory::Segment> segments;
    if (horizon > 0.0) {
        hier.extend_output(level, horizon);
        double t = 0.0;
        for (const EventRecord& ev : hier.events(level)) {
            if (t >= horizon) break;
            const double end = std::min(t + ev.jump, horizon);
            segments.push_back({t, end, ev.state});
            t += ev.jump;
        }
    }
    return Trajectory(level, hier.environment().breadth(), std::move(segments), horizon);
}

double local_time(const Trajectory& traj, const NodePath& prefix, double t) {
    if (t > traj.horizon())
        throw std::out_of_range("local_time: t beyond trajectory horizon");
    const std::size_t k = prefix.size();
    if (k > traj.depth()) throw PathNotFound("local_time: prefix deeper than trajectory");
    std::uint64_t want = 0;
    for (std::uint32_t c : prefix) {
        if (c < 1 || c > traj.breadth()) throw PathNotFound("local_time: bad coordinate");
        want = want * traj.breadth() + (c - 1);
    }
    double acc = 0.0;
    for (const auto& seg : traj.segments()) {
        if (seg.start >= t) break;
        if (traj.prefix_index(seg.state, k) == want) acc += std::min(seg.end, t) - seg.start;
    }
    return acc;
}

PiecewisePath decompose_by_state(const PiecewisePath& theta_upper,
                                 const Trajectory& parent, const NodePath& state) {
    if (state.size() != parent.depth())
        throw PathNotFound("decompose_by_state: state depth must match the trajectory");
    std::uint64_t want = 0;
    for (std::uint32_t c : state) want = want * parent.breadth() + (c - 1);

    std::vector<double> times, sizes;
    double local_before = 0.0;  // local time accumulated in earlier segments
    std::size_t seg = 0;
    const auto& segments = parent.segments();
    for (std::size_t i = 0; i < theta_upper.jump_count(); ++i) {
        const double s = theta_upper.jump_time(i);
        if (s >= parent.horizon()) break;
        while (seg < segments.size() && segments[seg].end <= s) {
            if (segments[seg].state == want)
                local_before += segments[seg].end - segments[seg].start;
            ++seg;
        }
        if (seg < segments.size() && segments[seg].state == want) {
            times.push_back(local_before + (s - segments[seg].start));
            sizes.push_back(theta_upper.jump_size(i));
        }
    }
    return PiecewisePath::from_jumps(std::move(times), std::move(sizes));
}

double occupation_fraction(const Trajectory& traj, const NodePath& cylinder) {
    if (!(traj.horizon() > 0.0))
        throw std::invalid_argument("occupation_fraction: empty trajectory");
    return local_time(traj, cylinder, traj.horizon()) / traj.horizon();
}

double pi_formula(const Environment& env, const NodePath& cylinder, std::size_t at_depth) {
    if (at_depth < cylinder.size() || at_depth > env.depth())
        throw PathNotFound("pi_formula: depth out of range");
    return env.cylinder_gbar_sum(cylinder, at_depth) / env.level_gbar_sum(at_depth);
}

CycleStats cycle_stats(const Trajectory& traj, const NodePath& cylinder) {
    const std::size_t k = cylinder.size();
    std::uint64_t want = 0;
    for (std::uint32_t c : cylinder) want = want * traj.breadth() + (c - 1);

    CycleStats stats;
    bool inside = false;
    double entered = 0.0, last_exit = 0.0;
    bool have_exit = false;
    for (const auto& seg : traj.segments()) {
        const bool match = traj.prefix_index(seg.state, k) == want;
        if (match && !inside) {
            entered = seg.start;
            if (have_exit) stats.gap_sum += seg.start - last_exit;
            inside = true;
        } else if (!match && inside) {
            stats.entrances.push_back(entered);
            stats.exits.push_back(seg.start);
            stats.sojourn_sum += seg.start - entered;
            last_exit = seg.start;
            have_exit = true;
            inside = false;
        }
    }
    // a sojourn still open at the horizon is an incomplete cycle: drop it,
    // along with the gap that led into it
    if (inside && have_exit) {
        const double last_gap = entered - last_exit;
        stats.gap_sum -= last_gap;
    }
    return stats;
}

namespace {

double rho0(std::uint32_t x, std::uint32_t y) {
    const double ix = x == kInfinityCoord ? 0.0 : 1.0 / static_cast<double>(x);
    const double iy = y == kInfinityCoord ? 0.0 : 1.0 / static_cast<double>(y);
    return std::fabs(ix - iy);
}

}  // namespace

double rho_distance(const State& a, const State& b) {
    const std::size_t common = std::min(a.coords.size(), b.coords.size());
    const std::size_t longest = std::max(a.coords.size(), b.coords.size());
    double sum = 0.0;
    double weight = 1.0;
    for (std::size_t i = 0; i < longest; ++i) {
        weight *= 0.5;
        if (i < common)
            sum += weight * rho0(a.coords[i], b.coords[i]);
        else
            sum += weight;  // padding symbol: distance 1 from any coordinate
    }
    return sum;
}

StatEstimate w_control_diagnostic(const AlphaSchedule& schedule, std::size_t k,
                                  std::size_t replicas, const SeedPlan& plan) {
    if (k + 1 > schedule.size())
        throw std::domain_error("w_control_diagnostic: schedule too short");
    const double ak = schedule.alpha(k);
    const double ak1 = schedule.alpha(k + 1);
    std::vector<double> samples(replicas);
    for (std::size_t i = 0; i < replicas; ++i) {
        Stream stream(plan, StreamKey{StreamPurpose::Diagnostics, k, 0, i});
        const double w = sample_stable(ak1, stream);
        samples[i] = std::pow(std::fabs(w - 1.0), ak);
    }
    return estimate_from_samples(samples);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
    char buf[32];
    for (const auto& seg : traj.segments()) {
        std::snprintf(buf, sizeof(buf), "%.17g", seg.start);
        out << buf;
        std::snprintf(buf, sizeof(buf), " %.17g", seg.end);
        out << buf;
        const State s = traj.decode(seg.state);
        for (std::uint32_t c : s.coords) {
            if (c == kInfinityCoord)
                out << " inf";
            else
                out << ' ' << c;
        }
        out << '\n';
    }
}

}  // namespace kproc
