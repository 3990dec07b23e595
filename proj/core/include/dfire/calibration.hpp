#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfire/loss.hpp"
#include "dfire/model.hpp"
#include "dfire/optimizer.hpp"
#include "dfire/propagation.hpp"
#include "dfire/tape.hpp"

namespace dfire {

struct WindField {
  RealGrid speed;
  RealGrid direction;
};

struct Observation {
  MaskGrid target;                 // observed affected region (burning | burned)
  std::optional<WindField> wind;   // wind in force during this observation window
};

/// Observation k (0-based) is compared against the state after
/// (k + 1) * steps_update_interval steps.
struct ObservationSchedule {
  std::vector<Observation> observations;
  int steps_update_interval = 1;

  int max_iterations() const noexcept { return static_cast<int>(observations.size()); }
  int steps_for_iteration(int iteration) const noexcept {
    return iteration * steps_update_interval;
  }
};

/// Wind updates implied by the schedule for a run of `total_steps`: the
/// fields of observation k take effect at step k * interval + 1.
std::vector<WindUpdate> schedule_wind_updates(const ObservationSchedule& schedule,
                                              int total_steps);

enum class EpochSeedPolicy {
  kPerEpoch,  // fresh derived seed every epoch
  kFixed,     // every epoch replays the epoch-0 seed
};

struct CalibrationConfig {
  int max_epochs = 10;
  AdamWConfig optimizer;
  StepRingsConfig rings;
  std::uint64_t base_seed = 0;
  EpochSeedPolicy seed_policy = EpochSeedPolicy::kPerEpoch;
  KernelOptions kernel;
};

struct IterationRecord {
  int epoch = 0;      // 1-based
  int iteration = 0;  // 1-based
  std::uint64_t seed = 0;
  ModelParams params;        // parameters that produced this evaluation
  ModelParams params_after;  // after optimizer step and clamp
  LossBreakdown loss;
  ParamGradient gradient;
  double jaccard = 0.0;
  std::uint64_t manhattan = 0;
  std::size_t attached_ignitions = 0;
  bool update_applied = false;
  std::uint64_t state_digest = 0;
};

struct CalibrationResult {
  ModelParams best;
  double best_loss = 0.0;  // +inf when nothing was evaluated
  std::vector<IterationRecord> history;
  RunManifest manifest;
  std::vector<std::string> diagnostics;
  bool diverged = false;
};

/// One calibration forward pass: simulate `steps` steps from the initial
/// state with the schedule's winds, recording attached steps on `tape`.
struct CalibrationForward {
  FireState state;
  GradientTape tape;
  std::vector<std::uint64_t> affected_at;  // affected count after each step
};

CalibrationForward calibration_forward(const Landscape& land, const MaskGrid& init,
                                       const ObservationSchedule& schedule,
                                       const ModelParams& params, int steps, std::uint64_t seed,
                                       const StepRingsConfig& rings,
                                       const KernelOptions& kernel = {});

/// Gradient-descent calibration of (c1, c2, a, p_h) against the schedule.
/// Every iteration re-simulates from the initial state with the epoch seed,
/// so parameter updates rather than fresh randomness drive the loss.
CalibrationResult calibrate(const Landscape& land, const MaskGrid& init,
                            const ObservationSchedule& schedule, const ModelParams& init_params,
                            const CalibrationConfig& config);

/// Reference fire used to score a parameter set with fresh seeds.
struct EvaluationReference {
  int steps = 0;
  MaskGrid final_target;
  std::vector<int> count_steps;          // 1-based steps at which counts are compared
  std::vector<std::uint64_t> counts;     // reference affected counts at count_steps
  std::vector<WindUpdate> wind_schedule;
};

EvaluationReference reference_from_schedule(const ObservationSchedule& schedule);

struct EvaluationSummary {
  std::vector<double> jaccard;
  std::vector<std::uint64_t> manhattan;
  double jaccard_mean = 0.0;
  double jaccard_std = 0.0;
  double manhattan_mean = 0.0;
  double manhattan_std = 0.0;
};

EvaluationSummary evaluate_params(const Landscape& land, const MaskGrid& init,
                                  const ModelParams& params, const EvaluationReference& reference,
                                  std::span<const std::uint64_t> seeds,
                                  const KernelOptions& kernel = {});

}  // namespace dfire
