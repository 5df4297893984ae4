#ifndef KPROC_CLOCKS_HPP
#define KPROC_CLOCKS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "kproc/environment.hpp"
#include "kproc/piecewise_path.hpp"
#include "kproc/rng.hpp"

namespace kproc {

/// One committed event of a level's merged stream.
struct EventRecord {
    std::uint32_t level = 0;          ///< k
    std::uint32_t channel = 0;        ///< x, 1-based
    double time = 0.0;                ///< sigma, internal time of level k
    double duration_weight = 0.0;     ///< T, unit-mean exponential
    std::uint64_t parent_state = 0;   ///< flat index of X_{k-1}(sigma) at depth k-1
    std::uint64_t state = 0;          ///< flat index of the visited depth-k node
    double jump = 0.0;                ///< clock jump carried by this event
};

/// How to weight the top-level jumps of an adjusted clock.
struct WeightConfig {
    enum class Mode {
        None,             ///< plain clocks
        EstimateAtDepth,  ///< W factors = estimate_W(x|_n, w_depth)
        StableSamples,    ///< W factors = exact stable(alpha_{n+1}) draws
    };
    Mode mode = Mode::None;
    std::size_t w_depth = 0;  ///< m for EstimateAtDepth; defaults to env.depth
};

constexpr std::size_t kDefaultEventBudget = 20'000'000;

/// Lazily extended realization of the level hierarchy X_1, ..., X_top over a
/// fixed environment. Level j consumes its own derived stream, so any prefix
/// of the construction is reproducible regardless of how far later calls
/// extend it. All levels share the replicate index; two hierarchies with the
/// same plan and replicate agree on every common level.
class ClockHierarchy {
  public:
    ClockHierarchy(const Environment& env, std::size_t top_level, const SeedPlan& plan,
                   std::uint64_t replicate, WeightConfig weights = {},
                   std::size_t event_budget = kDefaultEventBudget);

    /// Same, with precomputed W factors (one per depth-top node; empty for a
    /// plain clock). Spares recomputing estimates across replicas.
    ClockHierarchy(const Environment& env, std::size_t top_level, const SeedPlan& plan,
                   std::uint64_t replicate, std::vector<double> w_factors,
                   std::size_t event_budget = kDefaultEventBudget);

    const Environment& environment() const { return *env_; }
    std::size_t top_level() const { return levels_.size(); }
    std::size_t total_events() const { return total_events_; }

    /// Ensure the level's clock output reaches at least `value`.
    void extend_output(std::size_t level, double value);

    /// Ensure the level's committed event times cover [0, t].
    void extend_domain(std::size_t level, double t);

    /// Committed events of a level.
    const std::vector<EventRecord>& events(std::size_t level) const;

    /// Snapshot of the realized clock Xi_level; horizon is the committed
    /// event-time extent.
    PiecewisePath clock(std::size_t level) const;

    /// theta_from^to as a path whose value reaches at least
    /// `external_horizon`, extending the realization as needed.
    PiecewisePath theta(std::size_t from, std::size_t to, double external_horizon);

    /// Point evaluation theta_from^to(t) without materializing the path.
    double theta_value(std::size_t from, std::size_t to, double t);

    /// State of X_level at physical time t of that level (flat depth-level
    /// index). Extends the realization as needed.
    std::uint64_t state_at(std::size_t level, double t);

    /// W factor attached to a depth-top node (1.0 for plain clocks).
    double w_factor(std::uint64_t node_index) const;
    const std::vector<double>& w_factors() const { return w_; }

  private:
    struct Level {
        Stream stream;
        std::vector<EventRecord> events;
        std::vector<double> cum;    ///< cumulative clock value after each event
        double pending_sigma = 0.0; ///< next (uncommitted) event time
        std::uint32_t pending_channel = 0;
        Level(Stream s) : stream(std::move(s)) {}
    };

    void commit_one(std::size_t level);
    double output(std::size_t level) const;

    const Environment* env_;
    std::vector<Level> levels_;  // levels_[j-1] = level j
    std::vector<double> w_;      // per depth-top node, empty when unweighted
    std::size_t event_budget_;
    std::size_t total_events_ = 0;
};

/// Events of the merged unit-rate streams {N^{k,x}: x <= M} on [0, horizon],
/// with the clock path they generate. The parent trajectory is taken from a
/// hierarchy realization at level k-1.
std::pair<PiecewisePath, std::vector<EventRecord>> simulate_xi(
    const Environment& env, std::size_t level, const SeedPlan& plan,
    std::uint64_t replicate, double horizon);

/// theta_k^n = Xi_n o ... o Xi_k realized until its value exceeds
/// `horizon_external`.
PiecewisePath simulate_theta(const Environment& env, std::size_t from_level,
                             std::size_t to_level, double horizon_external,
                             const SeedPlan& plan, std::uint64_t replicate);

/// Adjusted clock: the top-level jumps carry W factors per `weights`.
PiecewisePath simulate_theta_adjusted(const Environment& env, std::size_t from_level,
                                      std::size_t to_level, double horizon_external,
                                      const SeedPlan& plan, std::uint64_t replicate,
                                      WeightConfig weights);

/// The per-node W factors a hierarchy topped at `top_level` would use.
std::vector<double> w_factor_vector(const Environment& env, std::size_t top_level,
                                    const SeedPlan& plan, WeightConfig weights);

}  // namespace kproc

#endif
