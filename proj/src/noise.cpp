#include "rgbm/noise.hpp"

#include <cmath>
#include <numbers>

namespace rgbm {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform in (0, 1]; never zero so the log below is finite.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

NoisePlan::NoisePlan(std::uint64_t seed) noexcept
    : seed_{seed}, key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

double NoisePlan::normal(std::uint32_t year_index, std::uint32_t substep_index,
                         std::uint32_t agent_index, std::uint32_t stream) const noexcept {
    const auto r = philox4x32({agent_index, substep_index, year_index, stream}, key_);
    // Box-Muller, cosine branch only: one deviate per counter.
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void NoisePlan::fill(std::uint32_t year_index, std::uint32_t substep_index, std::span<double> out,
                     std::uint32_t stream) const noexcept {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = normal(year_index, substep_index, static_cast<std::uint32_t>(i), stream);
    }
}

} // namespace rgbm
