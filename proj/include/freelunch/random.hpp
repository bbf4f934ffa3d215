#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace freelunch {

/// Deterministic random source for one trial. The stream is fixed by
/// (seed, trial) alone, so any trial can be replayed in isolation.
///
/// Bounded draws use rejection sampling on the raw engine output instead of
/// std::uniform_int_distribution, whose output differs between standard
/// libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t trial = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi].
    int uniform(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return lo + static_cast<int>(x % span);
    }

    /// True with probability num/den.
    bool chance(int num, int den) { return uniform(0, den - 1) < num; }

    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))]; }

private:
    std::mt19937_64 engine_;
};

}  // namespace freelunch
