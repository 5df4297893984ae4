#ifndef KPROC_KPROCESS_HPP
#define KPROC_KPROCESS_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "kproc/clocks.hpp"
#include "kproc/environment.hpp"
#include "kproc/stats.hpp"

namespace kproc {

/// Coordinate value standing for the unresolved "infinity" symbol.
constexpr std::uint32_t kInfinityCoord = std::numeric_limits<std::uint32_t>::max();

/// A point of the depth-n state space; coordinates are 1-based child
/// choices, kInfinityCoord marks an unresolved coordinate.
struct State {
    std::vector<std::uint32_t> coords;
};

/// Piecewise-constant right-continuous record of a simulated K process.
/// Segments tile [0, horizon]; states are stored as flat depth-n indices.
class Trajectory {
  public:
    struct Segment {
        double start = 0.0;
        double end = 0.0;
        std::uint64_t state = 0;
    };

    Trajectory(std::size_t depth, std::size_t breadth, std::vector<Segment> segments,
               double horizon);

    std::size_t depth() const { return depth_; }
    std::size_t breadth() const { return breadth_; }
    double horizon() const { return horizon_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Flat state index at time t (t in [0, horizon)).
    std::uint64_t state_index_at(double t) const;
    State state_at(double t) const;

    /// Flat index of the first k coordinates of a depth-n flat index.
    std::uint64_t prefix_index(std::uint64_t state, std::size_t k) const;

    State decode(std::uint64_t state) const;

  private:
    std::size_t depth_;
    std::size_t breadth_;
    double horizon_;
    std::vector<Segment> segments_;
    std::vector<double> ends_;  // segment end times for lookup
};

struct KProcessRealization {
    Trajectory trajectory;
    std::vector<PiecewisePath> clocks;  ///< realized Xi_1..Xi_n snapshots
};

/// X_n on [0, horizon] built by the level recursion, plus the realized
/// clocks for reuse.
KProcessRealization simulate_k_process(const Environment& env, std::size_t depth,
                                       double horizon, const SeedPlan& plan,
                                       std::uint64_t replicate = 0,
                                       std::size_t event_budget = kDefaultEventBudget);

/// Trajectory of X_level extracted from an existing hierarchy realization,
/// extending it to cover [0, horizon].
Trajectory extract_trajectory(ClockHierarchy& hier, std::size_t level, double horizon);

/// Lebesgue time spent in the cylinder [prefix] up to t.
double local_time(const Trajectory& traj, const NodePath& prefix, double t);

/// Restriction of an upper clock's jump measure to the times the parent
/// process sits at `state`, reindexed by the local time at that state. The
/// upper path's jump times must live on the parent trajectory's time axis;
/// jumps beyond the trajectory horizon are dropped.
PiecewisePath decompose_by_state(const PiecewisePath& theta_upper,
                                 const Trajectory& parent, const NodePath& state);

/// local_time(cylinder, horizon) / horizon.
double occupation_fraction(const Trajectory& traj, const NodePath& cylinder);

/// Finite-depth empirical-measure formula:
///   pi(x|_k) = sum_{y|_n in [x|_k]_n} gbar_n(y) / sum_{all y|_n} gbar_n(y).
double pi_formula(const Environment& env, const NodePath& cylinder, std::size_t at_depth);

/// Entrance/exit times of a cylinder; the final incomplete cycle is
/// discarded.
struct CycleStats {
    std::vector<double> entrances;  ///< U_i
    std::vector<double> exits;      ///< V_i, same length as entrances
    double sojourn_sum = 0.0;       ///< sum of V_i - U_i
    double gap_sum = 0.0;           ///< sum of U_{i+1} - V_i
    std::size_t complete_cycles() const { return exits.size(); }
};
CycleStats cycle_stats(const Trajectory& traj, const NodePath& cylinder);

/// Product metric rho(a, b) = sum_k 2^-k |1/a_k - 1/b_k| with 1/inf = 0 and
/// a padding symbol of distance 1 from every coordinate for length mismatch.
double rho_distance(const State& a, const State& b);

/// MC estimate of E|W(x|_k) - 1|^(alpha_k) with exact stable W draws at
/// exponent alpha_{k+1}.
StatEstimate w_control_diagnostic(const AlphaSchedule& schedule, std::size_t k,
                                  std::size_t replicas, const SeedPlan& plan);

/// Text dump: one line per segment (start end coord...coord), "inf" for the
/// infinity symbol.
void write_trajectory(std::ostream& out, const Trajectory& traj);

}  // namespace kproc

#endif
