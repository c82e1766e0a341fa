#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace climb {

// Deterministic random stream: xoshiro256** seeded through SplitMix64.
// Substreams are derived from (master seed, index), so work split across
// threads produces the same draws as a serial run. All derived quantities
// (uniforms, normals, shuffles) are computed here from raw 64-bit output
// rather than through std:: distributions, which are not portable.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static RandomStream substream(std::uint64_t master_seed, std::uint64_t index) {
        // golden-ratio spacing keeps consecutive indices far apart in seed space
        return RandomStream(master_seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform on [0, 1), 53-bit resolution
    double next_uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (cosine branch)
    double next_normal() {
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; // (0,1]
        const double u2 = next_uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // unbiased integer in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Fisher-Yates random permutation of 1..n
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 1);
        for (int i = n - 1; i > 0; --i) {
            const auto j = static_cast<int>(next_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(p[i], p[j]);
        }
        return p;
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

} // namespace climb
