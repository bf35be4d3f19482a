#pragma once

#include <cstdint>
#include <vector>

namespace cellwalk {

/// Counter-based splittable generator: the value at (seed, stream, counter)
/// is a pure function of the key, so parallel runs are bitwise reproducible
/// regardless of thread count.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull))) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Vose alias table for O(1) sampling from a fixed discrete distribution.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights);

    int sample(std::uint64_t r) const {
        const std::uint64_t hi = r >> 32;
        const std::uint64_t lo = r & 0xFFFFFFFFull;
        const auto k = static_cast<std::size_t>((hi * size_) >> 32);
        const double coin = static_cast<double>(lo) * 0x1.0p-32;
        return coin < accept_[k] ? static_cast<int>(k) : alias_[k];
    }

private:
    std::uint64_t size_ = 0;
    std::vector<double> accept_;
    std::vector<int> alias_;
};

}  // namespace cellwalk
