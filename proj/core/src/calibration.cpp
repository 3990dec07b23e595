#include "dfire/calibration.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dfire/metrics.hpp"
#include "dfire/rng.hpp"

namespace dfire {

std::vector<WindUpdate> schedule_wind_updates(const ObservationSchedule& schedule,
                                              int total_steps) {
  std::vector<WindUpdate> updates;
  for (std::size_t k = 0; k < schedule.observations.size(); ++k) {
    const auto& wind = schedule.observations[k].wind;
    if (!wind) continue;
    const int step = static_cast<int>(k) * schedule.steps_update_interval + 1;
    if (step > total_steps) break;
    updates.push_back({step, wind->speed, wind->direction});
  }
  return updates;
}

CalibrationForward calibration_forward(const Landscape& land, const MaskGrid& init,
                                       const ObservationSchedule& schedule,
                                       const ModelParams& params, int steps, std::uint64_t seed,
                                       const StepRingsConfig& rings,
                                       const KernelOptions& kernel) {
  CalibrationForward out;
  out.state = new_fire_state(init, land);
  out.tape.reshape(land.rows(), land.cols(), kernel.normalization);
  out.affected_at.reserve(static_cast<std::size_t>(steps));

  const std::vector<WindUpdate> updates = schedule_wind_updates(schedule, steps);
  Landscape scheduled;
  const Landscape* active = &land;
  if (!updates.empty()) {
    scheduled = land;
    active = &scheduled;
  }

  std::size_t next_update = 0;
  for (int s = 1; s <= steps; ++s) {
    if (next_update < updates.size() && updates[next_update].step == s) {
      scheduled.wind_speed = updates[next_update].speed;
      scheduled.wind_direction = updates[next_update].direction;
      ++next_update;
    }
    const bool attach = check_if_attach(s, steps, rings);
    step_forward(out.state, *active, params, seed, attach ? &out.tape : nullptr, kernel);
    out.affected_at.push_back(out.state.affected_count());
  }
  return out;
}

namespace {

void check_schedule(const Landscape& land, const ObservationSchedule& schedule) {
  if (schedule.observations.empty()) {
    throw std::invalid_argument("calibrate: observation schedule is empty");
  }
  if (schedule.steps_update_interval < 1) {
    throw std::invalid_argument("calibrate: steps_update_interval must be positive");
  }
  const Shape expected{land.rows(), land.cols()};
  for (std::size_t k = 0; k < schedule.observations.size(); ++k) {
    const auto& obs = schedule.observations[k];
    if (obs.target.shape() != expected) {
      throw std::invalid_argument("calibrate: observation " + std::to_string(k + 1) + " shape " +
                                  shape_to_string(obs.target.shape()) + " does not match " +
                                  shape_to_string(expected));
    }
    if (obs.wind && (obs.wind->speed.shape() != expected || obs.wind->direction.shape() != expected)) {
      throw std::invalid_argument("calibrate: observation " + std::to_string(k + 1) +
                                  " wind shape mismatch");
    }
  }
}

std::string describe(const ModelParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "c1=" << p.c1 << " c2=" << p.c2 << " a=" << p.a << " p_h=" << p.p_h;
  return out.str();
}

}  // namespace

CalibrationResult calibrate(const Landscape& land, const MaskGrid& init,
                            const ObservationSchedule& schedule, const ModelParams& init_params,
                            const CalibrationConfig& config) {
  CalibrationResult result;
  result.best = init_params;
  result.best_loss = std::numeric_limits<double>::infinity();
  RunManifest& manifest = result.manifest;
  manifest.base_seed = config.base_seed;
  manifest.steps_update_interval = schedule.steps_update_interval;
  manifest.max_epochs = config.max_epochs;
  manifest.max_iterations = schedule.max_iterations();
  manifest.learning_rate = config.optimizer.learning_rate;

  if (config.max_epochs <= 0) return result;
  check_schedule(land, schedule);
  if (!params_in_clamp_box(init_params)) {
    throw std::invalid_argument("calibrate: initial parameters outside the clamp box (" +
                                describe(init_params) + ")");
  }

  const auto& observations = schedule.observations;
  std::vector<std::uint64_t> observed_counts;
  for (const auto& obs : observations) observed_counts.push_back(count_true(obs.target));

  ModelParams params = init_params;
  ModelParams last_finite = params;
  OptimizerState optimizer{config.optimizer, {}, {}, 0};

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto seed_index =
        config.seed_policy == EpochSeedPolicy::kFixed ? 0u : static_cast<std::uint32_t>(epoch - 1);
    const std::uint64_t seed = derive_epoch_seed(config.base_seed, seed_index);
    manifest.epoch_seeds.push_back(seed);

    for (int it = 1; it <= schedule.max_iterations(); ++it) {
      const int steps = schedule.steps_for_iteration(it);
      CalibrationForward fwd =
          calibration_forward(land, init, schedule, params, steps, seed, config.rings, config.kernel);
      const Observation& obs = observations[static_cast<std::size_t>(it - 1)];
      const LossResult loss = combined_loss(fwd.state.accumulator, obs.target);

      IterationRecord rec;
      rec.epoch = epoch;
      rec.iteration = it;
      rec.seed = seed;
      rec.params = params;
      rec.loss = loss.breakdown;
      rec.attached_ignitions = fwd.tape.size();
      rec.state_digest = state_digest(fwd.state);
      rec.jaccard = jaccard_index(obs.target, fwd.state.affected());
      std::vector<std::uint64_t> predicted_counts;
      for (int k = 1; k <= it; ++k) {
        predicted_counts.push_back(
            fwd.affected_at[static_cast<std::size_t>(schedule.steps_for_iteration(k) - 1)]);
      }
      rec.manhattan = manhattan_distance(
          std::span<const std::uint64_t>(observed_counts.data(), static_cast<std::size_t>(it)),
          predicted_counts);

      if (!std::isfinite(loss.breakdown.total)) {
        result.diverged = true;
        result.diagnostics.push_back("epoch " + std::to_string(epoch) + " iteration " +
                                     std::to_string(it) +
                                     ": non-finite loss; epoch aborted, restored " +
                                     describe(last_finite));
        params = last_finite;
        rec.params_after = params;
        result.history.push_back(rec);
        break;
      }
      last_finite = params;

      rec.gradient = backward_params(fwd.tape, loss.gradient, params, config.kernel.threads);
      const AdamWOutcome step = adamw_update(optimizer, params, rec.gradient);
      if (step.accepted) {
        optimizer = step.state;
        params = clamp_params(step.params);
        rec.update_applied = true;
      } else {
        result.diagnostics.push_back("epoch " + std::to_string(epoch) + " iteration " +
                                     std::to_string(it) + ": non-finite gradient rejected");
      }
      rec.params_after = params;
      manifest.trajectory.push_back({epoch, it, params});

      if (it == schedule.max_iterations() && loss.breakdown.total < result.best_loss) {
        result.best_loss = loss.breakdown.total;
        result.best = rec.params;
      }
      result.history.push_back(rec);
    }
  }
  return result;
}

EvaluationReference reference_from_schedule(const ObservationSchedule& schedule) {
  EvaluationReference ref;
  const int n = schedule.max_iterations();
  ref.steps = schedule.steps_for_iteration(n);
  if (n > 0) ref.final_target = schedule.observations.back().target;
  for (int k = 1; k <= n; ++k) {
    ref.count_steps.push_back(schedule.steps_for_iteration(k));
    ref.counts.push_back(count_true(schedule.observations[static_cast<std::size_t>(k - 1)].target));
  }
  ref.wind_schedule = schedule_wind_updates(schedule, ref.steps);
  return ref;
}

EvaluationSummary evaluate_params(const Landscape& land, const MaskGrid& init,
                                  const ModelParams& params, const EvaluationReference& reference,
                                  std::span<const std::uint64_t> seeds,
                                  const KernelOptions& kernel) {
  if (reference.count_steps.size() != reference.counts.size()) {
    throw std::invalid_argument("evaluate_params: reference count series is inconsistent");
  }
  EvaluationSummary summary;
  for (std::uint64_t seed : seeds) {
    SimulationRequest request;
    request.steps = reference.steps;
    request.seed = seed;
    request.wind_schedule = reference.wind_schedule;
    request.options = kernel;
    const SimulationResult run = run_simulation(land, params, init, request);
    summary.jaccard.push_back(jaccard_index(reference.final_target, run.final_state.affected()));
    std::vector<std::uint64_t> predicted;
    for (int step : reference.count_steps) {
      if (step < 1 || step > reference.steps) {
        throw std::out_of_range("evaluate_params: count step outside the run");
      }
      predicted.push_back(run.series[static_cast<std::size_t>(step - 1)].affected);
    }
    summary.manhattan.push_back(manhattan_distance(reference.counts, predicted));
  }

  auto moments = [](const auto& values, double& mean, double& stddev) {
    const auto n = static_cast<double>(values.size());
    if (values.empty()) return;
    double sum = 0.0;
    for (auto v : values) sum += static_cast<double>(v);
    mean = sum / n;
    if (values.size() < 2) return;
    double ss = 0.0;
    for (auto v : values) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
    stddev = std::sqrt(ss / (n - 1.0));
  };
  moments(summary.jaccard, summary.jaccard_mean, summary.jaccard_std);
  moments(summary.manhattan, summary.manhattan_mean, summary.manhattan_std);
  return summary;
}

}  // namespace dfire
