#include "dfire/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dfire {

std::string shape_to_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Landscape Landscape::uniform(std::size_t rows, std::size_t cols, double cell_side) {
  Landscape land;
  land.wind_speed = RealGrid::grid(rows, cols);
  land.wind_direction = RealGrid::grid(rows, cols);
  land.slope = RealGrid(Shape{rows, cols, 3, 3});
  land.canopy = RealGrid::grid(rows, cols);
  land.density = RealGrid::grid(rows, cols);
  land.cell_side = cell_side;
  return land;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i];
  }
  return out.str();
}

namespace {

void check_finite(const RealGrid& grid, const char* name, ValidationReport& report) {
  const auto values = grid.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      report.violations.push_back(std::string(name) + " non-finite at flat index " +
                                  std::to_string(i));
      return;
    }
  }
}

std::string at(std::size_t r, std::size_t c) {
  return "(" + std::to_string(r) + "," + std::to_string(c) + ")";
}

}  // namespace

ValidationReport validate_landscape(const Landscape& land) {
  ValidationReport report;
  const Shape& base = land.wind_speed.shape();
  if (base.size() != 2 || base[0] == 0 || base[1] == 0) {
    report.violations.push_back("wind_speed shape " + shape_to_string(base) +
                                " is not a non-empty H x W grid");
    return report;
  }
  const std::size_t rows = base[0];
  const std::size_t cols = base[1];

  auto check_2d = [&](const RealGrid& grid, const char* name) {
    if (grid.shape() != base) {
      report.violations.push_back(std::string(name) + " shape " + shape_to_string(grid.shape()) +
                                  " does not match " + shape_to_string(base));
      return false;
    }
    return true;
  };

  const bool direction_ok = check_2d(land.wind_direction, "wind_direction");
  const bool canopy_ok = check_2d(land.canopy, "canopy");
  const bool density_ok = check_2d(land.density, "density");
  const Shape slope_shape{rows, cols, 3, 3};
  const bool slope_ok = land.slope.shape() == slope_shape;
  if (!slope_ok) {
    report.violations.push_back("slope shape " + shape_to_string(land.slope.shape()) +
                                " expected " + shape_to_string(slope_shape));
  }

  if (!(land.cell_side > 0.0) || !std::isfinite(land.cell_side)) {
    report.violations.push_back("cell_side must be positive");
  }

  check_finite(land.wind_speed, "wind_speed", report);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (land.wind_speed(r, c) < 0.0) {
        report.violations.push_back("wind_speed negative at " + at(r, c));
        r = rows;
        break;
      }
    }
  }
  if (direction_ok) check_finite(land.wind_direction, "wind_direction", report);
  if (slope_ok) check_finite(land.slope, "slope", report);

  auto check_factor = [&](const RealGrid& grid, const char* name) {
    check_finite(grid, name, report);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (grid(r, c) < -1.0) {
          report.violations.push_back(std::string(name) + " below -1 at " + at(r, c));
          return;
        }
      }
    }
  };
  if (canopy_ok) check_factor(land.canopy, "canopy");
  if (density_ok) check_factor(land.density, "density");
  return report;
}

ModelParams clamp_params(const ModelParams& p) {
  ModelParams out = p;
  out.a = std::clamp(p.a, kParamMin, kParamMax);
  out.c1 = std::clamp(p.c1, kParamMin, kParamMax);
  out.c2 = std::clamp(p.c2, kParamMin, kParamMax);
  out.p_h = std::clamp(p.p_h, kBaseProbabilityMin, kParamMax);
  return out;
}

bool params_in_clamp_box(const ModelParams& p) {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  return in(p.a, kParamMin, kParamMax) && in(p.c1, kParamMin, kParamMax) &&
         in(p.c2, kParamMin, kParamMax) && in(p.p_h, kBaseProbabilityMin, kParamMax);
}

ValidationReport validate_params(const ModelParams& p) {
  ValidationReport report;
  for (auto [value, name] : {std::pair{p.c1, "c1"}, std::pair{p.c2, "c2"}, std::pair{p.a, "a"},
                             std::pair{p.p_h, "p_h"}, std::pair{p.p_continue, "p_continue"}}) {
    if (!std::isfinite(value)) report.violations.push_back(std::string(name) + " is not finite");
  }
  if (p.p_continue < 0.0 || p.p_continue > 1.0) {
    report.violations.push_back("p_continue outside [0, 1]");
  }
  return report;
}

std::size_t FireState::affected_count() const {
  std::size_t n = 0;
  const auto b = burning.values();
  const auto d = burned.values();
  for (std::size_t i = 0; i < b.size(); ++i) n += (b[i] | d[i]) != 0;
  return n;
}

MaskGrid FireState::affected() const {
  MaskGrid out(burning.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (burning[i] | burned[i]) ? 1 : 0;
  return out;
}

FireState new_fire_state(const MaskGrid& init) {
  if (init.rank() != 2) {
    throw std::invalid_argument("initial fire must be an H x W mask, got " +
                                shape_to_string(init.shape()));
  }
  FireState state;
  state.burning = MaskGrid(init.shape());
  state.burned = MaskGrid(init.shape());
  state.accumulator = RealGrid(init.shape());
  for (std::size_t i = 0; i < init.size(); ++i) {
    if (init[i]) {
      state.burning[i] = 1;
      state.accumulator[i] = kSeedAccumulator;
    }
  }
  return state;
}

FireState new_fire_state(const MaskGrid& init, const Landscape& land) {
  const Shape expected{land.rows(), land.cols()};
  if (init.shape() != expected) {
    throw std::invalid_argument("initial fire shape " + shape_to_string(init.shape()) +
                                " does not match landscape " + shape_to_string(expected));
  }
  return new_fire_state(init);
}

std::optional<std::string> check_state_invariants(const FireState& state) {
  if (state.burned.shape() != state.burning.shape() ||
      state.accumulator.shape() != state.burning.shape()) {
    return "state layers have mismatched shapes";
  }
  for (std::size_t i = 0; i < state.burning.size(); ++i) {
    if (state.burning[i] && state.burned[i]) {
      return "cell " + std::to_string(i) + " is both burning and burned";
    }
    const double acc = state.accumulator[i];
    if (!(acc >= 0.0)) return "accumulator negative or NaN at " + std::to_string(i);
    if (acc != 0.0 && !state.burning[i] && !state.burned[i]) {
      return "accumulator set on a cell that never burned at " + std::to_string(i);
    }
  }
  return std::nullopt;
}

}  // namespace dfire
