#include <doctest.h>

#include <cmath>
#include <vector>

#include "kproc/rng.hpp"
#include "kproc/stable.hpp"
#include "kproc/stats.hpp"

using namespace kproc;

namespace {

std::vector<double> draw(double alpha, std::size_t n, std::uint64_t seed) {
    std::vector<double> xs(n);
    Stream s(SeedPlan{seed}, StreamKey{StreamPurpose::Diagnostics, 0, 0, 0});
    for (auto& x : xs) x = sample_stable(alpha, s);
    return xs;
}

}  // namespace

TEST_CASE("alpha = 1 is the point mass at 1") {
    Stream s(SeedPlan{1}, StreamKey{});
    for (int i = 0; i < 10; ++i) CHECK(sample_stable(1.0, s) == 1.0);
}

TEST_CASE("empirical Laplace transform matches exp(-lambda^alpha)") {
    const std::size_t n = 200000;
    for (double alpha : {0.3, 0.5, 0.8, 0.95}) {
        const auto xs = draw(alpha, n, 2024);
        for (double lam : {0.5, 1.0, 2.0}) {
            std::vector<double> vals(n);
            for (std::size_t i = 0; i < n; ++i) vals[i] = std::exp(-lam * xs[i]);
            const auto est = estimate_from_samples(vals);
            const double oracle = std::exp(-std::pow(lam, alpha));
            CHECK(std::fabs(est.mean - oracle) <= 3.5 * est.std_error);
        }
    }
}

TEST_CASE("fractional moment at alpha 0.5 matches Gamma(0.5)/Gamma(0.75)") {
    const std::size_t n = 400000;
    const auto xs = draw(0.5, n, 99);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = std::pow(xs[i], 0.25);
    const auto est = estimate_from_samples(vals);
    CHECK(std::fabs(est.mean - 1.4464090846320771) <= 3.5 * est.std_error);
}

TEST_CASE("alpha = 0.5 agrees with the inverse-square-normal law") {
    // for alpha = 1/2 the law is 1/(2 N^2) with N standard normal; compare
    // a few quantiles
    const std::size_t n = 200000;
    auto xs = draw(0.5, n, 7);
    std::sort(xs.begin(), xs.end());
    // P(X <= x) = 2(1 - Phi(1/sqrt(2x))); frozen quantiles at p = 0.25, 0.5, 0.75:
    // x_p = 1/(2 z^2) with z = Phi^-1(1 - p/2)
    const double q25 = 0.5 / (1.150349380376008 * 1.150349380376008);
    const double q50 = 0.5 / (0.6744897501960817 * 0.6744897501960817);
    const double q75 = 0.5 / (0.3186393639643751 * 0.3186393639643751);
    CHECK(xs[n / 4] == doctest::Approx(q25).epsilon(0.02));
    CHECK(xs[n / 2] == doctest::Approx(q50).epsilon(0.02));
    CHECK(xs[3 * n / 4] == doctest::Approx(q75).epsilon(0.02));
}
