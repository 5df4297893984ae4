#ifndef KPROC_ENVIRONMENT_HPP
#define KPROC_ENVIRONMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kproc/rng.hpp"
#include "kproc/schedule.hpp"

namespace kproc {

/// A node of the tree as the sequence of 1-based child choices from the
/// root; the empty path is the root.
using NodePath = std::vector<std::uint32_t>;

/// Expected total mass of the discarded marks below a cutoff for a PPP with
/// intensity c t^(-1-alpha):  c * cutoff^(1-alpha) / (1-alpha).
double node_tail_mass(double c, double alpha, double smallest_kept);

/// The `count` largest marks of a PPP on (0,inf) with intensity
/// c t^(-1-alpha), strictly decreasing. Inverse-tail transform of the
/// arrival times E_1 < E_2 < ... of a unit-rate Poisson stream:
/// mark_i = ((c/alpha) / E_i)^(1/alpha).
std::vector<double> ordered_ppp_marks(double c, double alpha, std::size_t count,
                                      Stream& stream);

/// Same transform applied to externally supplied arrival times.
std::vector<double> ppp_marks_from_arrivals(double c, double alpha,
                                            std::span<const double> arrivals);

constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// The truncated random environment: at every node of the depth-n,
/// breadth-M tree, the M largest ordered marks of an independent power-law
/// PPP, plus per-node Campbell bounds on the discarded mass. Immutable
/// after generation.
class Environment {
  public:
    std::size_t depth() const { return depth_; }
    std::size_t breadth() const { return breadth_; }
    const AlphaSchedule& schedule() const { return schedule_; }
    const SeedPlan& seed_plan() const { return plan_; }

    /// Flat index of a node among the M^k nodes at its depth.
    std::uint64_t node_index(const NodePath& node) const;
    NodePath node_path(std::size_t depth, std::uint64_t index) const;

    std::size_t nodes_at(std::size_t depth) const;

    /// Marks of the level-(parent depth + 1) children of `parent`,
    /// decreasing.
    std::span<const double> child_marks(const NodePath& parent) const;
    std::span<const double> child_marks(std::size_t parent_depth, std::uint64_t parent_index) const;

    /// gamma_k(node) for a node at depth k >= 1.
    double mark(const NodePath& node) const;
    double mark(std::size_t depth, std::uint64_t index) const;

    /// gbar_k(node) = prod_{j<=k} gamma_j(node|_j); 1 at the root.
    double gbar(const NodePath& node) const;
    double gbar(std::size_t depth, std::uint64_t index) const;

    /// Campbell bound on the discarded mark mass at `parent`.
    double tail_mass(const NodePath& parent) const;
    double tail_mass(std::size_t parent_depth, std::uint64_t parent_index) const;

    /// Smallest retained child mark at `parent` (the induced threshold).
    double cutoff(std::size_t parent_depth, std::uint64_t parent_index) const;

    /// Sum of gbar_k over all retained depth-k nodes.
    double level_gbar_sum(std::size_t k) const;

    /// Sum of gbar_k over retained depth-k descendants of `base`.
    double cylinder_gbar_sum(const NodePath& base, std::size_t k) const;

    /// Truncated partial sum defining W(base) at depth n:
    ///   sum over retained y|_n in [base]_n of (gbar_n(y)/gbar_k(base))^(alpha_{n+1}).
    double estimate_W(const NodePath& base, std::size_t up_to_depth) const;

    /// estimate_W for every depth-k node at once (flat-indexed).
    std::vector<double> estimate_W_level(std::size_t k, std::size_t up_to_depth) const;

    friend Environment generate_environment(const AlphaSchedule&, std::size_t,
                                            std::size_t, const SeedPlan&, std::size_t);
    friend Environment read_environment(std::istream&);

  private:
    Environment() = default;
    void rebuild_derived();
    void check_path(const NodePath& node, std::size_t want_depth) const;

    AlphaSchedule schedule_ = AlphaSchedule::from_alphas({0.5, 1.0});
    std::size_t depth_ = 0;
    std::size_t breadth_ = 0;
    SeedPlan plan_;
    // marks_[k-1]: the M^k marks at depth k, ordered so that the children of
    // parent p occupy the contiguous block [p*M, (p+1)*M), decreasing inside.
    std::vector<std::vector<double>> marks_;
    std::vector<std::vector<double>> gbar_;   // same layout
    std::vector<std::vector<double>> tails_;  // tails_[k-1][parent] at depth k-1
};

/// Independent ordered-mark lists at every node; deterministic in
/// (schedule, depth, breadth, plan). Throws BudgetExceeded if the tree would
/// store more than `node_budget` marks.
Environment generate_environment(const AlphaSchedule& schedule, std::size_t depth,
                                 std::size_t breadth, const SeedPlan& plan,
                                 std::size_t node_budget = kDefaultNodeBudget);

/// Self-describing text serialization; 17 significant digits, bit-exact
/// round trip on the decimal form.
void write_environment(std::ostream& out, const Environment& env);
Environment read_environment(std::istream& in);

void save_environment(const std::string& path, const Environment& env);
Environment load_environment(const std::string& path);

}  // namespace kproc

#endif
