#include "commands.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <new>
#include <ostream>

#include "dfire/calibration.hpp"
#include "dfire/grid_file.hpp"
#include "dfire/metrics.hpp"
#include "dfire/report_writers.hpp"

namespace dfire::cli {

namespace fs = std::filesystem;

namespace {

struct World {
  Landscape land;
  MaskGrid init;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

std::string numbered(const char* stem, int step, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06d.%s", stem, step, ext);
  return buf;
}

std::string real12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

World load_world(const RunConfig& cfg) {
  World w;
  std::optional<MaskGrid> bundled_fire;
  if (cfg.landscape) {
    LoadedBundle bundle = load_landscape_bundle(*cfg.landscape, cfg.slope_sign);
    w.land = std::move(bundle.landscape);
    bundled_fire = std::move(bundle.initial_fire);
  } else {
    SyntheticOptions opts;
    opts.wind_speed = cfg.wind_speed;
    opts.wind_direction = cfg.wind_direction;
    opts.fuel_offset = cfg.fuel_offset;
    opts.slope_sign = cfg.slope_sign;
    w.land = make_synthetic(cfg.synthetic, cfg.size, cfg.size, opts);
  }
  if (const auto report = validate_landscape(w.land); !report.ok()) {
    throw ValidationError("landscape: " + report.summary());
  }
  if (cfg.ignition) {
    w.init = read_mask_grid(*cfg.ignition);
  } else if (bundled_fire) {
    w.init = std::move(*bundled_fire);
  } else {
    w.init = centered_ignition(w.land.rows(), w.land.cols());
  }
  if (w.init.shape() != Shape{w.land.rows(), w.land.cols()}) {
    throw ConfigError("ignition mask " + shape_to_string(w.init.shape()) +
                      " does not match landscape " +
                      shape_to_string(Shape{w.land.rows(), w.land.cols()}));
  }
  return w;
}

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw fs::filesystem_error("cannot create output directory", dir, ec);
}

void write_state_grids(const FireState& state, const fs::path& dir) {
  write_grid(state.burning, dir / "burning.ptfg");
  write_grid(state.burned, dir / "burned.ptfg");
  write_grid(state.affected(), dir / "affected.ptfg");
  write_real_grid(state.accumulator, dir / "accumulator.ptfg");
}

MaskGrid read_any_mask(const fs::path& path) {
  GridData data = read_grid(path);
  if (auto* mask = std::get_if<MaskGrid>(&data)) return std::move(*mask);
  const FloatGrid& f = std::get<FloatGrid>(data);
  MaskGrid mask(f.shape());
  for (std::size_t i = 0; i < f.size(); ++i) mask[i] = f[i] != 0.0f ? 1 : 0;
  return mask;
}

}  // namespace

int simulate_cmd(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const World world = load_world(cfg);
  SimulationRequest request;
  request.steps = cfg.steps;
  request.seed = cfg.seed;
  request.snapshot_every = cfg.snapshot_every;
  request.options = cfg.kernel();
  const SimulationResult run = run_simulation(world.land, cfg.params, world.init, request);

  prepare_out(cfg.out);
  for (const FireState& snap : run.snapshots) {
    write_snapshot(snap, world.land, cfg.out / numbered("snapshot", snap.step, "ppm"));
    write_grid(snap.affected(), cfg.out / numbered("affected", snap.step, "ptfg"));
  }
  write_state_grids(run.final_state, cfg.out);
  write_series_csv(run.series, cfg.out / "series.csv");

  KeyValueFile manifest = cfg.describe();
  manifest.set("final_step", static_cast<long long>(run.final_state.step));
  manifest.set("final_burning", static_cast<long long>(count_true(run.final_state.burning)));
  manifest.set("final_burned", static_cast<long long>(count_true(run.final_state.burned)));
  manifest.set("final_affected", static_cast<long long>(run.final_state.affected_count()));
  manifest.set("state_digest", hex64(state_digest(run.final_state)));
  manifest.save(cfg.out / "manifest.txt");

  out << "steps=" << run.final_state.step << " affected=" << run.final_state.affected_count()
      << " digest=" << hex64(state_digest(run.final_state)) << "\n";
  return kExitOk;
}

int calibrate_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.targets.empty()) throw ConfigError("calibrate needs at least one --target observation");
  const World world = load_world(cfg);
  ObservationSchedule schedule;
  schedule.steps_update_interval = cfg.steps_update_interval;
  for (const auto& path : cfg.targets) schedule.observations.push_back({read_any_mask(path), {}});

  CalibrationConfig cc;
  cc.max_epochs = cfg.max_epochs;
  cc.optimizer.learning_rate = cfg.lr;
  cc.rings = cfg.rings;
  cc.base_seed = cfg.seed;
  cc.seed_policy = cfg.fixed_epoch_seed ? EpochSeedPolicy::kFixed : EpochSeedPolicy::kPerEpoch;
  cc.kernel = cfg.kernel();
  const CalibrationResult result = calibrate(world.land, world.init, schedule, cfg.params, cc);

  prepare_out(cfg.out);
  KeyValueFile best = params_record(result.best);
  best.save(cfg.out / "best_params.txt");

  std::string csv =
      "epoch,iteration,seed,loss,bce,mse,jaccard,manhattan,attached,c1,c2,a,p_h,"
      "grad_c1,grad_c2,grad_a,grad_p_h,updated\n";
  for (const IterationRecord& r : result.history) {
    const std::vector<std::string> row{
        std::to_string(r.epoch),          std::to_string(r.iteration),
        std::to_string(r.seed),           format_real(r.loss.total),
        format_real(r.loss.bce_term),     format_real(r.loss.mse_term),
        format_real(r.jaccard),           std::to_string(r.manhattan),
        std::to_string(r.attached_ignitions), format_real(r.params.c1),
        format_real(r.params.c2),         format_real(r.params.a),
        format_real(r.params.p_h),        format_real(r.gradient.c1),
        format_real(r.gradient.c2),       format_real(r.gradient.a),
        format_real(r.gradient.p_h),      r.update_applied ? "1" : "0"};
    csv += join(row, ',') + "\n";
  }
  write_text_file(cfg.out / "iterations.csv", csv);

  KeyValueFile manifest = cfg.describe();
  std::vector<std::string> seeds;
  for (auto s : result.manifest.epoch_seeds) seeds.push_back(std::to_string(s));
  manifest.set("epoch_seeds", join(seeds, ','));
  manifest.set("max_iterations", static_cast<long long>(result.manifest.max_iterations));
  manifest.set("best_loss", format_real(result.best_loss));
  manifest.set("diverged", result.diverged ? "true" : "false");
  for (const auto& [k, v] : best.entries()) manifest.set("best_" + k, v);
  for (std::size_t i = 0; i < result.manifest.trajectory.size(); ++i) {
    const ParamSnapshot& p = result.manifest.trajectory[i];
    manifest.set("trajectory_" + std::to_string(i + 1),
                 std::to_string(p.epoch) + "," + std::to_string(p.iteration) + "," +
                     format_real(p.params.c1) + "," + format_real(p.params.c2) + "," +
                     format_real(p.params.a) + "," + format_real(p.params.p_h));
  }
  for (std::size_t i = 0; i < result.diagnostics.size(); ++i) {
    manifest.set("diagnostic_" + std::to_string(i + 1), result.diagnostics[i]);
  }
  manifest.save(cfg.out / "manifest.txt");

  for (const auto& d : result.diagnostics) err << "dfire: warning: " << d << "\n";
  out << "best_loss=" << real12(result.best_loss) << " c1=" << real12(result.best.c1)
      << " c2=" << real12(result.best.c2) << " a=" << real12(result.best.a)
      << " p_h=" << real12(result.best.p_h) << "\n";
  if (result.diverged) {
    err << "dfire: error: calibration diverged; last finite parameters written\n";
    return kExitDiverged;
  }
  return kExitOk;
}

int metrics_cmd(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.predictions.empty() || cfg.targets.empty()) {
    throw ConfigError("metrics needs --pred and --target grids");
  }
  if (cfg.predictions.size() != cfg.targets.size()) {
    throw ConfigError("metrics: " + std::to_string(cfg.predictions.size()) + " prediction grids but " +
                      std::to_string(cfg.targets.size()) + " target grids");
  }
  std::vector<std::uint64_t> pred_counts, target_counts;
  MaskGrid last_pred, last_target;
  for (std::size_t i = 0; i < cfg.targets.size(); ++i) {
    last_pred = read_any_mask(cfg.predictions[i]);
    last_target = read_any_mask(cfg.targets[i]);
    if (last_pred.shape() != last_target.shape()) {
      throw ConfigError("metrics: shape mismatch between " + cfg.predictions[i].string() + " " +
                        shape_to_string(last_pred.shape()) + " and " + cfg.targets[i].string() +
                        " " + shape_to_string(last_target.shape()));
    }
    pred_counts.push_back(count_true(last_pred));
    target_counts.push_back(count_true(last_target));
  }
  out << "jaccard=" << real12(jaccard_index(last_target, last_pred)) << "\n";
  out << "manhattan=" << manhattan_distance(target_counts, pred_counts) << "\n";
  return kExitOk;
}

int bench_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using Clock = std::chrono::steady_clock;
  out << "size,threads,seconds,state_hash\n";
  int status = kExitOk;
  for (std::size_t size : cfg.bench_sizes) {
    for (int threads : cfg.bench_threads) {
      try {
        SyntheticOptions opts;
        opts.wind_speed = cfg.wind_speed;
        opts.wind_direction = cfg.wind_direction;
        const Landscape land = make_synthetic({SyntheticKind::kFlat, 0}, size, size, opts);
        const MaskGrid init = centered_ignition(size, size);
        SimulationRequest request;
        request.steps = cfg.steps;
        request.seed = cfg.seed;
        request.options = cfg.kernel();
        request.options.threads = threads;
        for (int i = 0; i < cfg.bench_warmup; ++i) run_simulation(land, cfg.params, init, request);
        double total = 0.0;
        std::uint64_t digest = 0;
        for (int i = 0; i < cfg.bench_repeats; ++i) {
          const auto t0 = Clock::now();
          const SimulationResult run = run_simulation(land, cfg.params, init, request);
          total += std::chrono::duration<double>(Clock::now() - t0).count();
          digest = state_digest(run.final_state);
        }
        out << size << "," << threads << "," << real12(total / cfg.bench_repeats) << ","
            << hex64(digest) << "\n";
      } catch (const std::bad_alloc&) {
        out << size << "," << threads << ",error,\n";
        err << "dfire: error: allocation failed for size " << size << "\n";
        status = kExitIo;
      } catch (const std::length_error&) {
        out << size << "," << threads << ",error,\n";
        err << "dfire: error: size " << size << " too large\n";
        status = kExitIo;
      }
      out.flush();
    }
  }
  return status;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == "simulate") return simulate_cmd(cfg, out, err);
    if (cfg.subcommand == "calibrate") return calibrate_cmd(cfg, out, err);
    if (cfg.subcommand == "metrics") return metrics_cmd(cfg, out, err);
    if (cfg.subcommand == "bench") return bench_cmd(cfg, out, err);
    err << "dfire: error: unknown subcommand '" << cfg.subcommand << "'\n";
    return kExitBadInput;
  } catch (const ValidationError& e) {
    err << "dfire: validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "dfire: bad input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    err << "dfire: bad input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::out_of_range& e) {
    err << "dfire: bad input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "dfire: I/O error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace dfire::cli
