#pragma once

// Counter-based random streams (Philox4x32-10). Every Monte Carlo trajectory
// owns the substream addressed by its index, so ensembles are reproducible
// bit-for-bit regardless of thread count or evaluation order.

#include <array>
#include <cmath>
#include <cstdint>

namespace holq {

namespace detail {

inline std::uint32_t mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    return static_cast<std::uint32_t>(p);
}

}  // namespace detail

// One 10-round Philox4x32 block: 128-bit counter + 64-bit key -> 128 random bits.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, hi1;
        const std::uint32_t lo0 = detail::mulhilo32(kMul0, ctr[0], hi0);
        const std::uint32_t lo1 = detail::mulhilo32(kMul1, ctr[2], hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

// A seedable, splittable stream: (seed, substream) fix the key and the upper
// counter words; draws advance only the lower 64 counter bits.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t substream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          hi_{static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)} {}

    // Uniform on (0, 1] with 53 random bits (never 0, so log() is safe).
    double uniform() {
        const std::uint64_t bits = next_u64();
        return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second member of each pair is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t next_u64() {
        if (word_ >= 4) refill();
        const std::uint32_t lo = block_[word_++];
        const std::uint32_t hi = block_[word_++];
        return (static_cast<std::uint64_t>(hi) << 32) | lo;
    }

private:
    void refill() {
        block_ = philox4x32({static_cast<std::uint32_t>(counter_),
                             static_cast<std::uint32_t>(counter_ >> 32), hi_[0], hi_[1]},
                            key_);
        ++counter_;
        word_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> hi_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int word_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace holq
