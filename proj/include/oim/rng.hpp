#pragma once

#include <cstdint>

namespace oim {

// splitmix64; used for all randomized verification so runs are reproducible
// from a single integer seed.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [lo, hi], inclusive
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }
};

// Per-trial seed derivation: serial and parallel runs over trial indices
// must see identical streams.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 g(seed ^ (trial * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
    return g.next();
}

} // namespace oim
