#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "kproc/environment.hpp"
#include "kproc/errors.hpp"
#include "kproc/stats.hpp"

using namespace kproc;

namespace {

const AlphaSchedule kSched = AlphaSchedule::from_alphas({0.5, 0.8, 0.9});

}  // namespace

TEST_CASE("node_tail_mass closed form") {
    CHECK(node_tail_mass(1.0, 0.5, 0.01) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(node_tail_mass(0.5, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(node_tail_mass(1.0, 0.5, 0.0) == 0.0);
    CHECK_THROWS_AS(node_tail_mass(1.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("ppp marks from pinned arrivals reproduce the hand computation") {
    const std::vector<double> arrivals{1.0, 2.0, 3.0};
    const auto marks = ppp_marks_from_arrivals(0.5, 0.5, arrivals);
    REQUIRE(marks.size() == 3);
    CHECK(marks[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(marks[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(marks[2] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("ordered marks are strictly decreasing and positive") {
    Stream s(SeedPlan{11}, StreamKey{StreamPurpose::EnvMarks, 1, 0, 0});
    const auto marks = ordered_ppp_marks(0.3, 0.6, 200, s);
    for (std::size_t i = 0; i < marks.size(); ++i) {
        CHECK(marks[i] > 0.0);
        if (i > 0) CHECK(marks[i] < marks[i - 1]);
    }
}

TEST_CASE("largest mark has the tail-measure distribution") {
    // P(mark_1 <= x) = exp(-(c/alpha) x^-alpha); at c = alpha = 0.5, x = 1
    // this is e^-1
    const std::size_t n = 100000;
    std::vector<double> hits(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream s(SeedPlan{31337}, StreamKey{StreamPurpose::EnvMarks, 1, 0, i});
        hits[i] = ordered_ppp_marks(0.5, 0.5, 1, s)[0] <= 1.0 ? 1.0 : 0.0;
    }
    const auto est = estimate_from_samples(hits);
    CHECK(std::fabs(est.mean - std::exp(-1.0)) <= 3.0 * est.std_error);
}

TEST_CASE("mapping invariance: weighted marks keep the PPP tail law") {
    // multiply level marks by iid weights U^2 (E U^(2*0.5) = E U = 1/2) and
    // check the largest weighted mark against exp(-(c E[X^a]/a) x^-a)
    const std::size_t n = 60000;
    const double c = 0.5, alpha = 0.5, x = 0.7;
    std::vector<double> hits(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream s(SeedPlan{777}, StreamKey{StreamPurpose::EnvMarks, 2, 0, i});
        const auto marks = ordered_ppp_marks(c, alpha, 64, s);
        double best = 0.0;
        for (double m : marks) {
            const double u = s.uniform01();
            best = std::max(best, m * u * u);
        }
        hits[i] = best <= x ? 1.0 : 0.0;
    }
    const auto est = estimate_from_samples(hits);
    const double oracle = std::exp(-(c * 0.5 / alpha) * std::pow(x, -alpha));
    // 64 retained marks cannot carry the whole tail; allow a small bias term
    CHECK(std::fabs(est.mean - oracle) <= 3.0 * est.std_error + 0.01);
}

TEST_CASE("generate_environment wires the tree up") {
    const auto env = generate_environment(kSched, 2, 5, SeedPlan{99});
    CHECK(env.depth() == 2);
    CHECK(env.breadth() == 5);
    CHECK(env.nodes_at(0) == 1);
    CHECK(env.nodes_at(2) == 25);

    const NodePath node{2, 3};
    CHECK(env.gbar(node) ==
          doctest::Approx(env.mark(NodePath{2}) * env.mark(node)).epsilon(1e-15));
    CHECK(env.gbar(NodePath{}) == 1.0);

    double total = 0.0;
    for (std::uint32_t a = 1; a <= 5; ++a)
        for (std::uint32_t b = 1; b <= 5; ++b) total += env.gbar(NodePath{a, b});
    CHECK(env.level_gbar_sum(2) == doctest::Approx(total).epsilon(1e-12));
    CHECK(env.cylinder_gbar_sum(NodePath{2}, 2) > 0.0);

    // tail mass recorded at every parent
    CHECK(env.tail_mass(NodePath{}) > 0.0);
    CHECK(env.tail_mass(NodePath{1}) > 0.0);
}

TEST_CASE("single-level environment has one node with decreasing marks") {
    const auto env = generate_environment(kSched.truncated(2), 1, 3, SeedPlan{5});
    const auto marks = env.child_marks(NodePath{});
    REQUIRE(marks.size() == 3);
    CHECK(marks[0] > marks[1]);
    CHECK(marks[1] > marks[2]);
}

TEST_CASE("generation is deterministic in the plan") {
    const auto a = generate_environment(kSched, 2, 8, SeedPlan{12345});
    const auto b = generate_environment(kSched, 2, 8, SeedPlan{12345});
    const auto c = generate_environment(kSched, 2, 8, SeedPlan{54321});
    bool identical = true, distinct = false;
    for (std::uint64_t i = 0; i < a.nodes_at(2); ++i) {
        identical = identical && a.gbar(2, i) == b.gbar(2, i);
        distinct = distinct || a.gbar(2, i) != c.gbar(2, i);
    }
    CHECK(identical);
    CHECK(distinct);
}

TEST_CASE("node budget is enforced") {
    CHECK_THROWS_AS(generate_environment(kSched, 2, 30, SeedPlan{1}, 100), BudgetExceeded);
}

TEST_CASE("estimate_W at the base depth is exactly one") {
    const auto env = generate_environment(kSched, 2, 6, SeedPlan{3});
    CHECK(env.estimate_W(NodePath{1, 2}, 2) == 1.0);
    CHECK(env.estimate_W(NodePath{}, 0) == 1.0);
    CHECK(env.estimate_W(NodePath{}, 2) > 0.0);
    CHECK_THROWS_AS(env.estimate_W(NodePath{1}, 3), PathNotFound);
}

TEST_CASE("estimate_W_level matches per-node estimate_W") {
    const auto env = generate_environment(kSched, 2, 4, SeedPlan{8});
    const auto level = env.estimate_W_level(1, 2);
    for (std::uint32_t x = 1; x <= 4; ++x)
        CHECK(level[x - 1] == doctest::Approx(env.estimate_W(NodePath{x}, 2)).epsilon(1e-15));
}

TEST_CASE("partial sums of gbar stay bounded across depths") {
    // finite-depth reading of the sup-sum lemma: every stored depth has a
    // finite retained sum
    const auto sched = AlphaSchedule::from_alphas({0.4, 0.7, 0.85, 0.95, 1.0});
    const auto env = generate_environment(sched, 4, 6, SeedPlan{21});
    for (std::size_t k = 1; k <= 4; ++k) {
        const double s = env.level_gbar_sum(k);
        CHECK(std::isfinite(s));
        CHECK(s > 0.0);
    }
}

TEST_CASE("successive W partial sums settle (Cauchy diagnostic)") {
    // along a fixed environment the truncated partial sums at successive
    // depths change less and less once the exponents approach one
    const auto sched = schedule_from_family(double_exponential_gap_family(), 8);
    const auto env = generate_environment(sched, 7, 5, SeedPlan{1234});
    double prev = env.estimate_W(NodePath{}, 1);
    std::vector<double> diffs;
    for (std::size_t n = 2; n <= 7; ++n) {
        const double cur = env.estimate_W(NodePath{}, n);
        diffs.push_back(std::fabs(cur - prev));
        prev = cur;
    }
    CHECK(diffs.back() < 1e-3);
    CHECK(diffs.back() < diffs.front());
}

TEST_CASE("serialization round trip is byte exact") {
    const auto env = generate_environment(kSched, 2, 7, SeedPlan{2718});
    std::ostringstream first;
    write_environment(first, env);
    std::istringstream in(first.str());
    const auto reloaded = read_environment(in);
    std::ostringstream second;
    write_environment(second, reloaded);
    CHECK(first.str() == second.str());
    CHECK(reloaded.level_gbar_sum(2) == env.level_gbar_sum(2));
    CHECK(reloaded.tail_mass(NodePath{1}) == env.tail_mass(NodePath{1}));
}
