#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "dfire/model.hpp"
#include "dfire/raster_ops.hpp"

namespace dfire {

enum class SyntheticKind { kFlat, kHill, kValley, kRandom };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kFlat;
  std::uint64_t seed = 0;  // used by kRandom only
};

/// Parses "flat", "hill", "valley" or "random:<seed>".
SyntheticSpec parse_synthetic(std::string_view text);
std::string synthetic_name(const SyntheticSpec& spec);

struct SyntheticOptions {
  double wind_speed = 4.0;       // m/s, uniform over the map
  double wind_direction = 45.0;  // degrees
  double cell_side = 30.0;
  double relief_per_cell = 2.5;  // peak relief in metres per cell of the shorter side
  double fuel_offset = 0.0;      // baseline canopy and density, >= -1
  SlopeSign slope_sign = SlopeSign::kDownhillPositive;
};

/// Altitude surface for the given kind, in metres.
RealGrid synthetic_altitude(const SyntheticSpec& spec, std::size_t rows, std::size_t cols,
                            const SyntheticOptions& options = {});

/// Full landscape: uniform wind, slope from the synthetic altitude, and
/// canopy = density = fuel_offset; kRandom adds noise to both.
Landscape make_synthetic(const SyntheticSpec& spec, std::size_t rows, std::size_t cols,
                         const SyntheticOptions& options = {});

/// Square block of `block` x `block` burning cells centred on the grid.
MaskGrid centered_ignition(std::size_t rows, std::size_t cols, std::size_t block = 3);

}  // namespace dfire
