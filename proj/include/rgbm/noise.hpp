#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace rgbm {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A pure
/// function of (key, counter); no internal state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Seed-keyed standard normal deviates addressed by (year, substep, agent).
///
/// Every deviate is computed from its own Philox block, so any subset of
/// indices can be evaluated in any order (or concurrently) with identical
/// results. The `stream` word separates independent uses of one seed: stream
/// 0 drives the income dynamics, higher streams are reserved for sampling the
/// initial population.
class NoisePlan {
  public:
    explicit NoisePlan(std::uint64_t seed) noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] double normal(std::uint32_t year_index, std::uint32_t substep_index,
                                std::uint32_t agent_index, std::uint32_t stream = 0) const noexcept;

    /// Fills out[i] = normal(year_index, substep_index, i, stream).
    void fill(std::uint32_t year_index, std::uint32_t substep_index, std::span<double> out,
              std::uint32_t stream = 0) const noexcept;

  private:
    std::uint64_t seed_;
    std::array<std::uint32_t, 2> key_;
};

} // namespace rgbm
