#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "dfire/model.hpp"
#include "dfire/rng.hpp"

// Independent long-double evaluations of the spread model, written from the
// model definition rather than from the library code.
namespace dfire::oracle {

using Real = long double;

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;

inline Real wind(Real c1, Real c2, Real speed, Real rel_deg) {
  return std::exp(speed * (c1 + c2 * (std::cos(rel_deg * kPi / 180.0L) - 1.0L)));
}

inline Real slope(Real a, Real deg) { return std::exp(a * deg); }

inline Real normalize(Real x, Real c) { return std::tanh(c * x); }

// Compass bearing of the step (dr, dc) with rows growing southward.
inline Real bearing_deg(int dr, int dc) {
  Real b = std::atan2(static_cast<Real>(-dr), static_cast<Real>(dc)) * 180.0L / kPi;
  return b < 0 ? b + 360.0L : b;
}

inline Real propagate(const ModelParams& p, const Landscape& land, Cell from, Cell to) {
  const int dr = to.row - from.row;
  const int dc = to.col - from.col;
  const auto fr = static_cast<std::size_t>(from.row), fc = static_cast<std::size_t>(from.col);
  const auto tr = static_cast<std::size_t>(to.row), tc = static_cast<std::size_t>(to.col);
  const Real rel = static_cast<Real>(land.wind_direction(fr, fc)) - bearing_deg(dr, dc);
  const Real s = land.slope(fr, fc, static_cast<std::size_t>(dr + 1), static_cast<std::size_t>(dc + 1));
  return static_cast<Real>(p.p_h) * (1.0L + land.canopy(tr, tc)) * (1.0L + land.density(tr, tc)) *
         wind(p.c1, p.c2, land.wind_speed(fr, fc), rel) * slope(p.a, s);
}

// 1 - prod(1 - p_i) written out as the alternating sum over non-empty subsets.
inline Real inclusion_exclusion(std::span<const double> probs) {
  const std::size_t n = probs.size();
  Real total = 0.0L;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Real term = 1.0L;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        term *= probs[i];
        ++bits;
      }
    }
    total += (bits % 2 == 1) ? term : -term;
  }
  return total;
}

inline Real slope_angle(Real source_alt, Real neighbor_alt, Real cell_side, bool diagonal) {
  const Real run = cell_side * (diagonal ? std::sqrt(2.0L) : 1.0L);
  return std::atan((source_alt - neighbor_alt) / run) * 180.0L / kPi;
}

inline bool rel_close(Real got, Real want, Real rel) {
  if (want == 0.0L) return got == 0.0L;
  return std::abs(got - want) <= rel * std::abs(want);
}

/// Cell-by-cell reference simulator: visits every cell, recomputes every
/// neighbor contribution with the oracle formulas and applies the same
/// draw rule as the kernel.
struct ReferenceSimulator {
  const Landscape& land;
  ModelParams params;
  std::uint64_t seed;
  Real c = 1.1486328125L;

  void step(FireState& s) const {
    const int step = s.step + 1;
    const FireState prev = s;
    const int rows = static_cast<int>(s.rows()), cols = static_cast<int>(s.cols());
    for (int r = 0; r < rows; ++r) {
      for (int col = 0; col < cols; ++col) {
        const auto ur = static_cast<std::size_t>(r), uc = static_cast<std::size_t>(col);
        const DrawKey base{seed, static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(r),
                           static_cast<std::uint32_t>(col), Channel::kIgnite};
        if (prev.burned(ur, uc)) continue;
        if (prev.burning(ur, uc)) {
          DrawKey k = base;
          k.channel = Channel::kContinue;
          if (!(uniform_draw(k) < params.p_continue)) {
            s.burning(ur, uc) = 0;
            s.burned(ur, uc) = 1;
          }
          continue;
        }
        Real keep = 1.0L;
        bool any = false;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (!dr && !dc) continue;
            const int nr = r + dr, nc = col + dc;
            if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
            if (!prev.burning(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc))) continue;
            any = true;
            keep *= 1.0L - normalize(propagate(params, land, {nr, nc}, {r, col}), c);
          }
        }
        if (!any) continue;
        const Real p = 1.0L - keep;
        if (uniform_draw(base) < static_cast<double>(p)) {
          s.burning(ur, uc) = 1;
          s.accumulator(ur, uc) = static_cast<double>(p);
        }
      }
    }
    s.step = step;
  }
};

}  // namespace dfire::oracle
