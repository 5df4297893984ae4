#ifndef KPROC_RNG_HPP
#define KPROC_RNG_HPP

#include <cstdint>
#include <random>
#include <span>

namespace kproc {

/// All randomness in a run flows from one base seed. Independent streams are
/// derived by hashing a (purpose, level, node, replicate) key into the base
/// seed, so regenerating any piece of the simulation with the same key
/// reproduces it bit for bit.
struct SeedPlan {
    std::uint64_t base_seed = 0;
};

enum class StreamPurpose : std::uint64_t {
    EnvMarks = 1,     ///< ordered PPP marks of one node
    Events = 2,       ///< merged event stream of one level
    StableW = 3,      ///< exact stable W draws at the top level
    Diagnostics = 4,  ///< standalone samplers in verification checks
};

struct StreamKey {
    StreamPurpose purpose = StreamPurpose::Diagnostics;
    std::uint64_t level = 0;
    std::uint64_t node = 0;  ///< flat node index (bijective with the path)
    std::uint64_t replicate = 0;
};

std::uint64_t derive_seed(const SeedPlan& plan, const StreamKey& key);

/// Independent sub-plan, e.g. one per replica environment.
SeedPlan fork_plan(const SeedPlan& plan, std::uint64_t salt);

/// Seeded stream of primitive draws. Wraps mt19937_64; every draw sequence
/// is a pure function of (plan, key).
class Stream {
  public:
    Stream(const SeedPlan& plan, const StreamKey& key)
        : engine_(derive_seed(plan, key)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-mean exponential, strictly positive.
    double exponential();

    /// Uniform integer in [1, n].
    std::uint32_t uniform_channel(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n) + 1u;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace kproc

#endif
