#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dfire/model.hpp"

namespace dfire {

class GradientTape;

struct NeighborOffset {
  int dr;
  int dc;
  double bearing_deg;  // East = 0, counterclockwise; row index grows southward
};

/// Moore neighborhood in the fixed product order NW, N, NE, W, E, SW, S, SE.
inline constexpr std::array<NeighborOffset, 8> kNeighbors{{
    {-1, -1, 135.0},
    {-1, 0, 90.0},
    {-1, 1, 45.0},
    {0, -1, 180.0},
    {0, 1, 0.0},
    {1, -1, 225.0},
    {1, 0, 270.0},
    {1, 1, 315.0},
}};

inline constexpr double kDefaultNormalization = 1.1486328125;

enum class FactorSite : std::uint8_t { kTarget, kSource };
enum class SlopeUnits : std::uint8_t { kDegrees, kRadians };

/// Model-structure switches and the worker count. None of these are
/// calibrated.
struct KernelOptions {
  double normalization = kDefaultNormalization;
  FactorSite factor_site = FactorSite::kTarget;
  SlopeUnits slope_units = SlopeUnits::kDegrees;
  int threads = 0;  // 0 = OpenMP default
};

double degrees_to_radians(double deg) noexcept;

double wind_factor(double c1, double c2, double wind_speed, double relative_angle_deg) noexcept;
double wind_factor_from_cos(double c1, double c2, double wind_speed,
                            double cos_minus_one) noexcept;
double slope_factor(double a, double slope_deg) noexcept;
double normalize_prob(double x, double c = kDefaultNormalization) noexcept;

/// 1 - prod(1 - p_i), multiplied in the order given.
double ignition_prob(std::span<const double> neighbor_probs) noexcept;

/// Landscape-derived inputs of one source -> target propagation. Together
/// with ModelParams they determine the raw propagation probability exactly.
struct EdgeTerms {
  double wind_speed = 0.0;
  double cos_minus_one = 0.0;  // cos(theta_w[source] - bearing) - 1
  double slope_deg = 0.0;
  double veg_factor = 1.0;  // 1 + canopy
  double den_factor = 1.0;  // 1 + density
};

EdgeTerms edge_terms(const Landscape& land, Cell source, int neighbor_index,
                     const KernelOptions& options = {});

/// p_h (1 + p_veg)(1 + p_den) p_w p_s evaluated from cached edge terms.
double raw_propagation(const ModelParams& params, const EdgeTerms& terms) noexcept;

/// Unnormalized probability that burning `from` spreads to neighbor `to`.
double propagate_prob(const ModelParams& params, const Landscape& land, Cell from, Cell to,
                      const KernelOptions& options = {});

/// Index into kNeighbors of the offset from -> to, or -1 if not adjacent.
int neighbor_index(Cell from, Cell to) noexcept;

/// Per-cell ignition probability of `cell` given the current burning layer
/// (0 when no neighbor burns). Exposed for diagnostics and tests.
double cell_ignition_prob(const FireState& state, const Landscape& land,
                          const ModelParams& params, Cell cell,
                          const KernelOptions& options = {});

struct StepStats {
  std::size_t newly_ignited = 0;
  std::size_t burned_out = 0;
};

/// Advances `state` by one step in place. Cells update from the previous
/// burning layer (double-buffered); random draws are keyed on
/// (seed, state.step + 1, cell, channel). When `tape` is non-null every new
/// ignition is recorded for the backward pass.
StepStats step_forward(FireState& state, const Landscape& land, const ModelParams& params,
                       std::uint64_t seed, GradientTape* tape,
                       const KernelOptions& options = {});

/// Marks the listed cells burning with a constant accumulator of 1.
/// Burned and already burning cells are left untouched.
void inject_ignitions(FireState& state, std::span<const Cell> cells);

struct WindUpdate {
  int step = 1;  // first step that uses these fields
  RealGrid speed;
  RealGrid direction;
};

struct SimulationRequest {
  int steps = 0;
  std::uint64_t seed = 0;
  std::vector<WindUpdate> wind_schedule;
  int snapshot_every = 0;  // 0 disables snapshots
  KernelOptions options;
};

struct StepRecord {
  int step = 0;
  std::size_t burning = 0;
  std::size_t burned = 0;
  std::size_t affected = 0;
};

struct SimulationResult {
  FireState final_state;
  std::vector<StepRecord> series;   // one entry per simulated step
  std::vector<FireState> snapshots; // every snapshot_every steps
};

SimulationResult run_simulation(const Landscape& land, const ModelParams& params,
                                const MaskGrid& init, const SimulationRequest& request);

/// Order-sensitive FNV-1a digest of both boolean layers and the accumulator
/// bit patterns.
std::uint64_t state_digest(const FireState& state);

}  // namespace dfire
