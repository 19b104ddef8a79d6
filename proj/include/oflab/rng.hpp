#pragma once

// Counter-based Gaussian noise: Philox4x32-10 keyed by the seed, with the
// counter holding (block, step, path). The normals of any (seed, path, step)
// triple can be regenerated independently of execution order.

#include <array>
#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace oflab {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxBlock philox4x32(PhiloxBlock ctr, PhiloxKey key) {
    constexpr std::uint32_t M0 = 0xD2511F53u;
    constexpr std::uint32_t M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += W0;
            key[1] += W1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for an independent sub-experiment, e.g. one rung of an eps ladder.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

/// Uniform in (0, 1) from 32 random bits; never 0 or 1.
inline double u32_to_open_unit(std::uint32_t x) {
    return (static_cast<double>(x) + 0.5) * 0x1p-32;
}

/// Uniform random bit generator over the Philox blocks of one counter
/// prefix (step, path), starting at block `first_block`.
class PhiloxBits {
public:
    using result_type = std::uint32_t;

    PhiloxBits(PhiloxKey key, std::uint32_t first_block, std::uint32_t step, std::uint32_t path_lo,
               std::uint32_t path_hi)
        : key_(key), block_(first_block), step_(step), path_lo_(path_lo), path_hi_(path_hi) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xFFFFFFFFu; }

    result_type operator()() {
        if (pos_ == 4) {
            buf_ = philox4x32({block_++, step_, path_lo_, path_hi_}, key_);
            pos_ = 0;
        }
        return buf_[static_cast<std::size_t>(pos_++)];
    }

private:
    PhiloxKey key_;
    std::uint32_t block_;
    std::uint32_t step_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    PhiloxBlock buf_{};
    int pos_ = 4;
};

class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t path)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path)),
          path_hi_(static_cast<std::uint32_t>(path >> 32)) {}

    /// Fills `out` with i.i.d. standard normals belonging to `step`
    /// (ziggurat sampling over the step's Philox blocks).
    void fill(std::uint64_t step, std::span<double> out) const {
        PhiloxBits bits(key_, 0, checked(step), path_lo_, path_hi_);
        boost::random::normal_distribution<double> normal;
        for (auto& v : out) v = normal(bits);
    }

    /// Uniforms in (0, 1) for `step`, drawn from a counter range disjoint
    /// from the one used by fill().
    void fill_uniform(std::uint64_t step, std::span<double> out) const {
        PhiloxBits bits(key_, 0x80000000u, checked(step), path_lo_, path_hi_);
        for (auto& v : out) v = u32_to_open_unit(bits());
    }

private:
    static std::uint32_t checked(std::uint64_t step) {
        if (step > 0xFFFFFFFFull) throw std::out_of_range("noise step index exceeds 2^32");
        return static_cast<std::uint32_t>(step);
    }

    PhiloxKey key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
};

}  // namespace oflab
