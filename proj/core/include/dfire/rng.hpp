#pragma once

#include <array>
#include <cstdint>

namespace dfire {

/// Which of the two per-step uniform fields a draw belongs to.
enum class Channel : std::uint32_t { kIgnite = 0, kContinue = 1 };

/// Coordinates of one uniform draw. A draw is a pure function of its key, so
/// a trajectory does not depend on thread count or cell visiting order.
struct DrawKey {
  std::uint64_t seed = 0;
  std::uint32_t step = 0;
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  Channel channel = Channel::kIgnite;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Frozen: golden values in the test suite depend on it.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Uniform real in [0, 1) with 53 bits of resolution.
double uniform_draw(const DrawKey& key) noexcept;

/// splitmix64 output finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic per-epoch seed. Injective in `epoch` for a fixed base seed
/// and injective in `base_seed` for a fixed epoch.
std::uint64_t derive_epoch_seed(std::uint64_t base_seed, std::uint32_t epoch) noexcept;

}  // namespace dfire
