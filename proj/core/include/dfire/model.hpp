#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfire/array.hpp"

namespace dfire {

/// Environmental rasters for one map. Wind, canopy and density are H x W;
/// slope is H x W x 3 x 3 holding the angle (degrees by default) from each
/// cell toward each Moore neighbor, indexed [dr + 1][dc + 1].
///
/// Canopy and density are the already-scaled factors that enter the spread
/// probability as (1 + factor); -1 encodes "no fuel".
struct Landscape {
  RealGrid wind_speed;      // m/s
  RealGrid wind_direction;  // degrees, East = 0, counterclockwise
  RealGrid slope;           // H x W x 3 x 3
  RealGrid canopy;
  RealGrid density;
  double cell_side = 30.0;  // metres

  std::size_t rows() const { return wind_speed.rows(); }
  std::size_t cols() const { return wind_speed.cols(); }

  /// All-zero landscape (flat, windless, neutral fuel) of the given size.
  static Landscape uniform(std::size_t rows, std::size_t cols, double cell_side = 30.0);
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_landscape(const Landscape& land);

/// The five scalar controls of the spread model. Calibration updates the
/// first four; p_continue is held fixed.
struct ModelParams {
  double c1 = 0.045;
  double c2 = 0.131;
  double a = 0.078;
  double p_h = 0.58;
  double p_continue = 0.5;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline constexpr double kParamMin = 0.0;
inline constexpr double kParamMax = 1.0;
inline constexpr double kBaseProbabilityMin = 0.2;

/// Projects a, c1, c2 onto [0, 1] and p_h onto [0.2, 1]. p_continue passes
/// through untouched.
ModelParams clamp_params(const ModelParams& params);

bool params_in_clamp_box(const ModelParams& params);

ValidationReport validate_params(const ModelParams& params);

/// Two exclusive boolean layers plus the ignition-probability accumulator
/// that feeds the loss.
struct FireState {
  MaskGrid burning;
  MaskGrid burned;
  RealGrid accumulator;
  int step = 0;

  std::size_t rows() const { return burning.rows(); }
  std::size_t cols() const { return burning.cols(); }
  std::size_t burning_count() const { return count_true(burning); }
  std::size_t burned_count() const { return count_true(burned); }
  std::size_t affected_count() const;

  /// burning | burned as a single mask.
  MaskGrid affected() const;
};

/// Initial value written to the accumulator for seeded and injected ignitions.
inline constexpr double kSeedAccumulator = 1.0;

FireState new_fire_state(const MaskGrid& init);
FireState new_fire_state(const MaskGrid& init, const Landscape& land);

/// Returns the first violated state invariant, if any.
std::optional<std::string> check_state_invariants(const FireState& state);

struct StepRingsConfig {
  int r_first = 2;
  int r_between = 5;
  int r_last = 10;

  int total() const noexcept { return r_first + r_between + r_last; }
};

struct ParamSnapshot {
  int epoch = 0;
  int iteration = 0;
  ModelParams params;
};

/// Everything needed to replay a calibration run.
struct RunManifest {
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> epoch_seeds;
  int steps_update_interval = 1;
  int max_epochs = 0;
  int max_iterations = 0;
  double learning_rate = 5e-3;
  std::vector<ParamSnapshot> trajectory;
};

}  // namespace dfire
