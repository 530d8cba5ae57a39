#pragma once

// Counter-based splittable RNG (Philox4x32-10, Salmon et al., SC 2011).
// Each (seed, stream) pair is an independent reproducible sequence; streams
// are cheap, so every Monte Carlo shard gets its own.

#include <array>
#include <cmath>
#include <cstdint>

namespace h3geo {

class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, 0u,
               static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint32_t next_u32() {
        if (buf_pos_ == 4) {
            block_ = bijection(ctr_, key_);
            advance_counter();
            buf_pos_ = 0;
        }
        return block_[buf_pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * u01(); }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // Box-Muller; u strictly positive.
        double u = 0.0;
        do { u = u01(); } while (u <= 0.0);
        const double v = u01();
        const double r = std::sqrt(-2.0 * std::log(u));
        cached_ = r * std::sin(6.283185307179586476925286766559 * v);
        have_cached_ = true;
        return r * std::cos(6.283185307179586476925286766559 * v);
    }

    std::array<double, 3> unit_sphere() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 6.283185307179586476925286766559);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

    // One application of the 10-round keyed bijection; exposed for tests
    // against the published known-answer vectors.
    static std::array<std::uint32_t, 4> bijection(std::array<std::uint32_t, 4> x,
                                                  std::array<std::uint32_t, 2> k) {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * x[0];
            const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * x[2];
            x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k[0],
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1],
                 static_cast<std::uint32_t>(p0)};
        }
        return x;
    }

private:
    void advance_counter() {
        if (++ctr_[0] == 0u) ++ctr_[1];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> block_{};
    int buf_pos_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace h3geo
