#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tfp {

// Seedable 64-bit generator with platform-independent bounded draws.
// std::uniform_int_distribution is implementation-defined, so every
// draw used by the simulators goes through below() / uniform01().
class Rng {
public:
    static constexpr std::string_view name = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). Rejection sampling keeps it exact.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t kTrialSeedMultiplier = 0xD1B54A32D192ED03ULL;

// Seed of trial k: mix64(base ^ (k * kTrialSeedMultiplier)).
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
    return mix64(base_seed ^ (trial_index * kTrialSeedMultiplier));
}

// Independent auxiliary stream (witness selection etc.) derived from a run seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(mix64(seed) ^ tag);
}

template <typename T>
void shuffle(T& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace tfp
