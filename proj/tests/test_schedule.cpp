#include <doctest.h>

#include <cmath>
#include <cmath>
#include <stdexcept>

#include "kproc/schedule.hpp"

using namespace kproc;

TEST_CASE("constant_c matches the closed form") {
    // 0.4/Gamma(0.5) = 0.4/sqrt(pi)
    CHECK(constant_c(0.4, 0.8) == doctest::Approx(0.22567583341910251478).epsilon(1e-13));
    CHECK(constant_c(0.5, 0.8) == doctest::Approx(0.21093164341948202630).epsilon(1e-13));
    CHECK(constant_c(0.5, 1.0) == doctest::Approx(0.28209479177387814347).epsilon(1e-13));
}

TEST_CASE("constant_c rejects bad orderings") {
    CHECK_THROWS_AS(constant_c(0.8, 0.5), std::domain_error);
    CHECK_THROWS_AS(constant_c(0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(constant_c(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(constant_c(0.5, 1.1), std::domain_error);
}

TEST_CASE("AlphaSchedule validates its invariants") {
    CHECK_THROWS_AS(AlphaSchedule::from_alphas({0.5}), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSchedule::from_alphas({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSchedule::from_alphas({0.8, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(AlphaSchedule::from_alphas({0.0, 0.5}), std::invalid_argument);
    // 1.0 is allowed only at the end
    CHECK_THROWS_AS(AlphaSchedule::from_alphas({1.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(AlphaSchedule::from_alphas({0.5, 0.8, 1.0}));
}

TEST_CASE("schedule accessors agree with the stored gaps") {
    const auto sched = AlphaSchedule::from_alphas({0.5, 0.8, 0.9});
    CHECK(sched.size() == 3);
    CHECK(sched.max_depth() == 2);
    CHECK(sched.alpha(1) == doctest::Approx(0.5));
    CHECK(sched.gap(2) == doctest::Approx(0.2));
    CHECK(sched.ratio_complement(1) == doctest::Approx(1.0 - 0.5 / 0.8).epsilon(1e-15));
    CHECK(sched.constant_c(1) == doctest::Approx(constant_c(0.5, 0.8)).epsilon(1e-15));
    CHECK(sched.constant_c(2) == doctest::Approx(constant_c(0.8, 0.9)).epsilon(1e-15));
}

TEST_CASE("gap storage keeps near-one exponents exact") {
    // alpha_k = 1 - 2^-2^k rounds to 1.0 in double for k >= 6; the gap form
    // keeps the ratio complement meaningful
    const auto fam = double_exponential_gap_family();
    const auto sched = schedule_from_family(fam, 9);
    CHECK(sched.gap(8) == doctest::Approx(std::exp2(-256.0)));
    CHECK(sched.ratio_complement(7) > 0.0);
    CHECK(sched.constant_c(7) > 0.0);
}

TEST_CASE("named families produce the documented gaps") {
    const auto geo = geometric_gap_family(0.5);
    CHECK(geo.gap(1) == doctest::Approx(0.5));
    CHECK(geo.gap(10) == doctest::Approx(std::exp2(-10.0)));
    const auto dexp = double_exponential_gap_family();
    CHECK(dexp.gap(3) == doctest::Approx(std::exp2(-8.0)));
    const auto harm = harmonic_gap_family();
    CHECK(harm.gap(4) == doctest::Approx(0.25));
}

TEST_CASE("family parsing") {
    CHECK(parse_family("geometric-gap r=0.25").gap(2) == doctest::Approx(0.0625));
    CHECK(parse_family("double-exponential-gap").gap(1) == doctest::Approx(0.25));
    CHECK(parse_family("harmonic-gap").gap(2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(parse_family("no-such-family"), std::invalid_argument);
}
