#include "dfire/raster_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dfire {

RealGrid slope_from_altitude(const RealGrid& altitude, double cell_side, SlopeSign sign) {
  if (altitude.rank() != 2) throw std::invalid_argument("slope_from_altitude: altitude must be H x W");
  if (!(cell_side > 0.0) || !std::isfinite(cell_side)) {
    throw std::invalid_argument("slope_from_altitude: cell side must be positive");
  }
  for (double e : altitude.values()) {
    if (!std::isfinite(e)) throw std::invalid_argument("slope_from_altitude: non-finite altitude");
  }
  const std::size_t rows = altitude.rows();
  const std::size_t cols = altitude.cols();
  RealGrid slope(Shape{rows, cols, 3, 3});
  const double to_deg = 180.0 / std::numbers::pi;
  const double orientation = sign == SlopeSign::kDownhillPositive ? 1.0 : -1.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const long nr = static_cast<long>(r) + dr;
          const long nc = static_cast<long>(c) + dc;
          if (nr < 0 || nc < 0 || nr >= static_cast<long>(rows) || nc >= static_cast<long>(cols)) continue;
          const double k = (dr != 0 && dc != 0) ? std::numbers::sqrt2 : 1.0;
          const double rise = orientation * (altitude(r, c) -
                                             altitude(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)));
          slope(r, c, static_cast<std::size_t>(dr + 1), static_cast<std::size_t>(dc + 1)) =
              std::atan(rise / (k * cell_side)) * to_deg;
        }
      }
    }
  }
  return slope;
}

WindPolar wind_from_uv(const RealGrid& u, const RealGrid& v) {
  if (u.shape() != v.shape()) {
    throw std::invalid_argument("wind_from_uv: u " + shape_to_string(u.shape()) + " and v " +
                                shape_to_string(v.shape()) + " differ");
  }
  WindPolar out{RealGrid(u.shape()), RealGrid(u.shape())};
  const double to_deg = 180.0 / std::numbers::pi;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.speed[i] = std::hypot(u[i], v[i]);
    double deg = std::atan2(v[i], u[i]) * to_deg;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg = 0.0;
    out.direction[i] = deg;
  }
  return out;
}

namespace {

RealGrid pad2(const RealGrid& grid, std::size_t cells, double fill) {
  RealGrid out = RealGrid::grid(grid.rows() + 2 * cells, grid.cols() + 2 * cells, fill);
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) out(r + cells, c + cells) = grid(r, c);
  }
  return out;
}

}  // namespace

Landscape pad_nonburnable(const Landscape& land, std::size_t cells) {
  Landscape out;
  out.cell_side = land.cell_side;
  out.wind_speed = pad2(land.wind_speed, cells, 0.0);
  out.wind_direction = pad2(land.wind_direction, cells, 0.0);
  out.canopy = pad2(land.canopy, cells, -1.0);
  out.density = pad2(land.density, cells, -1.0);
  out.slope = RealGrid(Shape{out.wind_speed.rows(), out.wind_speed.cols(), 3, 3});
  for (std::size_t r = 0; r < land.rows(); ++r) {
    for (std::size_t c = 0; c < land.cols(); ++c) {
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) out.slope(r + cells, c + cells, i, j) = land.slope(r, c, i, j);
      }
    }
  }
  return out;
}

MaskGrid pad_mask(const MaskGrid& mask, std::size_t cells) {
  MaskGrid out = MaskGrid::grid(mask.rows() + 2 * cells, mask.cols() + 2 * cells);
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    for (std::size_t c = 0; c < mask.cols(); ++c) out(r + cells, c + cells) = mask(r, c);
  }
  return out;
}

}  // namespace dfire
