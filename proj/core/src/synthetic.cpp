#include "dfire/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dfire/rng.hpp"

namespace dfire {

namespace {

constexpr int kRandomBumps = 6;

double gaussian(double dr, double dc, double radius) {
  return std::exp(-(dr * dr + dc * dc) / (2.0 * radius * radius));
}

// Uniform in [0, 1) keyed by (seed, slot, index); independent of the spread
// draws because the channel numbers differ.
double noise(std::uint64_t seed, std::uint32_t slot, std::uint32_t index) {
  return uniform_draw({seed, slot, index, 0, static_cast<Channel>(0x5ee0u)});
}

}  // namespace

SyntheticSpec parse_synthetic(std::string_view text) {
  if (text == "flat") return {SyntheticKind::kFlat, 0};
  if (text == "hill") return {SyntheticKind::kHill, 0};
  if (text == "valley") return {SyntheticKind::kValley, 0};
  constexpr std::string_view prefix = "random:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view digits = text.substr(prefix.size());
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec == std::errc{} && end == digits.data() + digits.size() && !digits.empty()) {
      return {SyntheticKind::kRandom, seed};
    }
  }
  throw std::invalid_argument("unknown synthetic landscape '" + std::string(text) +
                              "' (expected flat, hill, valley or random:<seed>)");
}

std::string synthetic_name(const SyntheticSpec& spec) {
  switch (spec.kind) {
    case SyntheticKind::kFlat: return "flat";
    case SyntheticKind::kHill: return "hill";
    case SyntheticKind::kValley: return "valley";
    case SyntheticKind::kRandom: return "random:" + std::to_string(spec.seed);
  }
  return "unknown";
}

RealGrid synthetic_altitude(const SyntheticSpec& spec, std::size_t rows, std::size_t cols,
                            const SyntheticOptions& options) {
  RealGrid alt = RealGrid::grid(rows, cols);
  if (spec.kind == SyntheticKind::kFlat || rows == 0 || cols == 0) return alt;
  const double side = static_cast<double>(std::min(rows, cols));
  const double relief = options.relief_per_cell * side;
  const double cr = 0.5 * static_cast<double>(rows - 1);
  const double cc = 0.5 * static_cast<double>(cols - 1);

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double dr = static_cast<double>(r) - cr;
      const double dc = static_cast<double>(c) - cc;
      switch (spec.kind) {
        case SyntheticKind::kHill:
          alt(r, c) = relief * gaussian(dr, dc, 0.3 * side);
          break;
        case SyntheticKind::kValley:
          // trough running north-south through the centre
          alt(r, c) = relief * (1.0 - gaussian(0.0, dc, 0.25 * side));
          break;
        default:
          break;
      }
    }
  }
  if (spec.kind != SyntheticKind::kRandom) return alt;

  for (int b = 0; b < kRandomBumps; ++b) {
    const auto slot = static_cast<std::uint32_t>(b);
    const double br = noise(spec.seed, slot, 0) * static_cast<double>(rows);
    const double bc = noise(spec.seed, slot, 1) * static_cast<double>(cols);
    const double radius = (0.1 + 0.2 * noise(spec.seed, slot, 2)) * side;
    const double height = relief * (noise(spec.seed, slot, 3) - 0.3);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        alt(r, c) += height * gaussian(static_cast<double>(r) - br, static_cast<double>(c) - bc, radius);
      }
    }
  }
  return alt;
}

Landscape make_synthetic(const SyntheticSpec& spec, std::size_t rows, std::size_t cols,
                         const SyntheticOptions& options) {
  Landscape land = Landscape::uniform(rows, cols, options.cell_side);
  land.wind_speed.fill(options.wind_speed);
  land.wind_direction.fill(options.wind_direction);
  land.slope = slope_from_altitude(synthetic_altitude(spec, rows, cols, options), options.cell_side,
                                   options.slope_sign);
  land.canopy.fill(options.fuel_offset);
  land.density.fill(options.fuel_offset);
  if (spec.kind == SyntheticKind::kRandom) {
    for (std::size_t i = 0; i < rows * cols; ++i) {
      const auto idx = static_cast<std::uint32_t>(i);
      land.canopy[i] = std::max(-1.0, land.canopy[i] + 0.6 * noise(spec.seed, 100, idx) - 0.3);
      land.density[i] = std::max(-1.0, land.density[i] + 0.6 * noise(spec.seed, 101, idx) - 0.3);
    }
  }
  return land;
}

MaskGrid centered_ignition(std::size_t rows, std::size_t cols, std::size_t block) {
  MaskGrid mask = MaskGrid::grid(rows, cols);
  block = std::min({block, rows, cols});
  const std::size_t r0 = (rows - block) / 2;
  const std::size_t c0 = (cols - block) / 2;
  for (std::size_t r = r0; r < r0 + block; ++r) {
    for (std::size_t c = c0; c < c0 + block; ++c) mask(r, c) = 1;
  }
  return mask;
}

}  // namespace dfire
