#include "kproc/rng.hpp"

#include <cmath>

namespace kproc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

}  // namespace

std::uint64_t derive_seed(const SeedPlan& plan, const StreamKey& key) {
    std::uint64_t h = splitmix64(plan.base_seed);
    h = mix(h, static_cast<std::uint64_t>(key.purpose));
    h = mix(h, key.level);
    h = mix(h, key.node);
    h = mix(h, key.replicate);
    return h;
}

SeedPlan fork_plan(const SeedPlan& plan, std::uint64_t salt) {
    return SeedPlan{mix(splitmix64(plan.base_seed ^ 0xa5a5a5a5a5a5a5a5ULL), salt)};
}

double Stream::exponential() { return -std::log(uniform01()); }

}  // namespace kproc
