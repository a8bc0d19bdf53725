#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace quatgreen {

/// Philox4x32-10 counter-based generator (Salmon et al. constants).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

/**
 * Stateless normal stream: the pair of deviates for `index` depends only on
 * (seed, sample, tag, index), so any partition of the work reproduces it.
 */
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint32_t sample, std::uint32_t tag)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, sample_(sample), tag_(tag) {}

    /// Two independent N(0, 1) deviates (Box-Muller).
    std::pair<double, double> normals(std::uint64_t index) const {
        const auto [u1, u2] = uniforms(index);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }

    /// Two uniforms; the first lies in (0, 1], the second in [0, 1).
    std::pair<double, double> uniforms(std::uint64_t index) const {
        const auto r = philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), sample_, tag_},
                                  key_);
        const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
        const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
        constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
        return {static_cast<double>((a >> 11) + 1) * scale, static_cast<double>(b >> 11) * scale};
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t sample_;
    std::uint32_t tag_;
};

}  // namespace quatgreen
