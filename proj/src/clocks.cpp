#include "kproc/clocks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kproc/errors.hpp"
#include "kproc/stable.hpp"

namespace kproc {

namespace {

Stream make_level_stream(const SeedPlan& plan, std::size_t level, std::uint64_t replicate) {
    return Stream(plan, StreamKey{StreamPurpose::Events, level, 0, replicate});
}

}  // namespace

ClockHierarchy::ClockHierarchy(const Environment& env, std::size_t top_level,
                               const SeedPlan& plan, std::uint64_t replicate,
                               WeightConfig weights, std::size_t event_budget)
    : ClockHierarchy(env, top_level, plan, replicate,
                     w_factor_vector(env, top_level, plan, weights), event_budget) {}

ClockHierarchy::ClockHierarchy(const Environment& env, std::size_t top_level,
                               const SeedPlan& plan, std::uint64_t replicate,
                               std::vector<double> w_factors, std::size_t event_budget)
    : env_(&env), event_budget_(event_budget) {
    if (top_level < 1 || top_level > env.depth())
        throw std::invalid_argument("ClockHierarchy: top level in [1, env depth]");
    if (!w_factors.empty() && w_factors.size() != env.nodes_at(top_level))
        throw std::invalid_argument("ClockHierarchy: weight vector size mismatch");
    levels_.reserve(top_level);
    for (std::size_t j = 1; j <= top_level; ++j) {
        levels_.emplace_back(make_level_stream(plan, j, replicate));
        Level& L = levels_.back();
        // first pending event
        L.pending_sigma = L.stream.exponential() / static_cast<double>(env.breadth());
        L.pending_channel = L.stream.uniform_channel(static_cast<std::uint32_t>(env.breadth()));
    }
    w_ = std::move(w_factors);
}

std::vector<double> w_factor_vector(const Environment& env, std::size_t top_level,
                                    const SeedPlan& plan, WeightConfig weights) {
    switch (weights.mode) {
        case WeightConfig::Mode::None:
            return {};
        case WeightConfig::Mode::EstimateAtDepth: {
            const std::size_t m = weights.w_depth == 0 ? env.depth() : weights.w_depth;
            if (m < top_level || m > env.depth())
                throw std::invalid_argument("w_factor_vector: w_depth in [top level, env depth]");
            return env.estimate_W_level(top_level, m);
        }
        case WeightConfig::Mode::StableSamples: {
            const double a = env.schedule().alpha(top_level + 1);
            const std::size_t count = env.nodes_at(top_level);
            std::vector<double> w(count);
            for (std::size_t i = 0; i < count; ++i) {
                Stream s(plan, StreamKey{StreamPurpose::StableW, top_level, i, 0});
                w[i] = sample_stable(a, s);
            }
            return w;
        }
    }
    return {};
}

double ClockHierarchy::output(std::size_t level) const {
    const Level& L = levels_[level - 1];
    return L.cum.empty() ? 0.0 : L.cum.back();
}

double ClockHierarchy::w_factor(std::uint64_t node_index) const {
    return w_.empty() ? 1.0 : w_[node_index];
}

void ClockHierarchy::commit_one(std::size_t level) {
    Level& L = levels_[level - 1];
    const double sigma = L.pending_sigma;
    const std::uint32_t channel = L.pending_channel;

    std::uint64_t parent_state = 0;
    if (level >= 2) {
        extend_output(level - 1, sigma);
        const Level& P = levels_[level - 2];
        const auto it = std::upper_bound(P.cum.begin(), P.cum.end(), sigma);
        parent_state = P.events[static_cast<std::size_t>(it - P.cum.begin())].state;
    }

    if (++total_events_ > event_budget_)
        throw BudgetExceeded("ClockHierarchy: event budget exceeded");

    EventRecord ev;
    ev.level = static_cast<std::uint32_t>(level);
    ev.channel = channel;
    ev.time = sigma;
    ev.duration_weight = L.stream.exponential();
    ev.parent_state = parent_state;
    ev.state = parent_state * env_->breadth() + (channel - 1);
    ev.jump = env_->mark(level, ev.state) * ev.duration_weight;
    if (level == levels_.size() && !w_.empty()) ev.jump *= w_[ev.state];

    L.cum.push_back((L.cum.empty() ? 0.0 : L.cum.back()) + ev.jump);
    L.events.push_back(ev);

    // draw the next pending event of the merged rate-M stream
    L.pending_sigma += L.stream.exponential() / static_cast<double>(env_->breadth());
    L.pending_channel = L.stream.uniform_channel(static_cast<std::uint32_t>(env_->breadth()));
}

void ClockHierarchy::extend_output(std::size_t level, double value) {
    while (output(level) <= value) commit_one(level);
}

void ClockHierarchy::extend_domain(std::size_t level, double t) {
    Level& L = levels_[level - 1];
    while (L.pending_sigma <= t) commit_one(level);
}

const std::vector<EventRecord>& ClockHierarchy::events(std::size_t level) const {
    return levels_[level - 1].events;
}

PiecewisePath ClockHierarchy::clock(std::size_t level) const {
    const Level& L = levels_[level - 1];
    std::vector<double> times(L.events.size()), sizes(L.events.size());
    for (std::size_t i = 0; i < L.events.size(); ++i) {
        times[i] = L.events[i].time;
        sizes[i] = L.events[i].jump;
    }
    return PiecewisePath::from_jumps(std::move(times), std::move(sizes), L.pending_sigma);
}

std::uint64_t ClockHierarchy::state_at(std::size_t level, double t) {
    if (level == 0) return 0;
    extend_output(level, t);
    const Level& L = levels_[level - 1];
    const auto it = std::upper_bound(L.cum.begin(), L.cum.end(), t);
    return L.events[static_cast<std::size_t>(it - L.cum.begin())].state;
}

PiecewisePath ClockHierarchy::theta(std::size_t from, std::size_t to,
                                    double external_horizon) {
    if (from < 1 || from > to || to > levels_.size())
        throw std::invalid_argument("theta: need 1 <= from <= to <= top level");
    if (external_horizon <= 0.0) return PiecewisePath();
    extend_output(to, external_horizon);

    // needed committed prefix, top-down: sigma_star[j] is the internal time
    // at which level j first lifts the composition across what level j+1
    // (or the caller, at the top) requires
    std::vector<double> sigma_star(to + 1, 0.0);
    double need = external_horizon;
    for (std::size_t j = to; j >= from; --j) {
        const Level& L = levels_[j - 1];
        const auto it = std::lower_bound(L.cum.begin(), L.cum.end(), need);
        const std::size_t idx = static_cast<std::size_t>(it - L.cum.begin());
        sigma_star[j] = L.events[idx].time;
        need = sigma_star[j];
    }

    PiecewisePath composed = clock(from).clipped(sigma_star[from]);
    for (std::size_t j = from + 1; j <= to; ++j) {
        // the crossing jump of the inner path may overshoot; commit the
        // outer level across the overshoot so its values there are known
        extend_domain(j, composed.total_mass());
        composed = compose(clock(j), composed);
    }
    return composed;
}

double ClockHierarchy::theta_value(std::size_t from, std::size_t to, double t) {
    if (from < 1 || from > to || to > levels_.size())
        throw std::invalid_argument("theta_value: need 1 <= from <= to <= top level");
    if (t < 0.0) throw std::invalid_argument("theta_value: t >= 0");
    double v = t;
    for (std::size_t j = from; j <= to; ++j) {
        extend_domain(j, v);
        const Level& L = levels_[j - 1];
        // value of Xi_j at internal time v: cumulative of the last event at or before v
        std::size_t lo = 0, hi = L.events.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (L.events[mid].time <= v)
                lo = mid + 1;
            else
                hi = mid;
        }
        v = lo == 0 ? 0.0 : L.cum[lo - 1];
        if (v == 0.0) break;  // zero propagates through every remaining level
    }
    return v;
}

std::pair<PiecewisePath, std::vector<EventRecord>> simulate_xi(
    const Environment& env, std::size_t level, const SeedPlan& plan,
    std::uint64_t replicate, double horizon) {
    ClockHierarchy hier(env, level, plan, replicate);
    if (horizon > 0.0) hier.extend_domain(level, horizon);
    std::vector<EventRecord> events;
    std::vector<double> times, sizes;
    for (const EventRecord& ev : hier.events(level)) {
        if (ev.time > horizon) break;
        events.push_back(ev);
        times.push_back(ev.time);
        sizes.push_back(ev.jump);
    }
    return {PiecewisePath::from_jumps(std::move(times), std::move(sizes), horizon),
            std::move(events)};
}

PiecewisePath simulate_theta(const Environment& env, std::size_t from_level,
                             std::size_t to_level, double horizon_external,
                             const SeedPlan& plan, std::uint64_t replicate) {
    ClockHierarchy hier(env, to_level, plan, replicate);
    return hier.theta(from_level, to_level, horizon_external);
}

PiecewisePath simulate_theta_adjusted(const Environment& env, std::size_t from_level,
                                      std::size_t to_level, double horizon_external,
                                      const SeedPlan& plan, std::uint64_t replicate,
                                      WeightConfig weights) {
    ClockHierarchy hier(env, to_level, plan, replicate, weights);
    return hier.theta(from_level, to_level, horizon_external);
}

}  // namespace kproc
