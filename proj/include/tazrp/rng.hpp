#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace tazrp {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Splittable seed derivation: the child seed depends only on (parent, lane),
// never on the order in which lanes are requested.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t lane) {
    return splitmix64(splitmix64(parent) ^ splitmix64(lane + 0x632be59bd9b4e019ULL));
}

// xoshiro256** (Blackman and Vigna). Small state makes per-site streams cheap.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed = 0) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            w = splitmix64(x);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0,1).
    double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential(double rate = 1.0) { return -std::log(uniform_open()) / rate; }

    // Bernoulli(p) draw.
    bool bernoulli(double p) { return uniform() < p; }

    // Geometric on {0,1,...} with P(k) = (1-q) q^k.
    std::int64_t geometric0(double q) {
        if (q <= 0.0) return 0;
        const double u = uniform_open();
        return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(q)));
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

}  // namespace tazrp
