#pragma once

#include <utility>

#include "dfire/array.hpp"
#include "dfire/model.hpp"

namespace dfire {

enum class SlopeSign {
  kDownhillPositive,  // positive when the source cell is higher than its neighbor
  kUphillPositive,    // positive when the neighbor is higher
};

/// Per-neighbor slope angle in degrees, H x W x 3 x 3, from an altitude grid
/// in metres: atan((E - E_neighbor) / (k l)) with k = 1 for edge neighbors
/// and sqrt(2) for diagonals. Off-grid neighbors and the center entry are 0.
RealGrid slope_from_altitude(const RealGrid& altitude, double cell_side,
                             SlopeSign sign = SlopeSign::kDownhillPositive);

struct WindPolar {
  RealGrid speed;      // m/s
  RealGrid direction;  // degrees in [0, 360), East = 0, counterclockwise
};

WindPolar wind_from_uv(const RealGrid& u, const RealGrid& v);

/// Surrounds the landscape with `cells` rings of non-burnable, flat,
/// windless cells (canopy = density = -1).
Landscape pad_nonburnable(const Landscape& land, std::size_t cells);
MaskGrid pad_mask(const MaskGrid& mask, std::size_t cells);

}  // namespace dfire
