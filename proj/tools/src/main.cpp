#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

using dfire::cli::SettingMap;

struct OptionSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr OptionSpec kWorldOptions[] = {
    {"--landscape", "landscape", "landscape bundle directory"},
    {"--synthetic", "synthetic", "flat, hill, valley or random:<seed> (when no --landscape)"},
    {"--size", "size", "synthetic map side in cells"},
    {"--wind-speed", "wind_speed", "synthetic wind speed, m/s"},
    {"--wind-direction", "wind_direction", "synthetic wind direction, degrees (East = 0, CCW)"},
    {"--fuel-offset", "fuel_offset", "synthetic baseline canopy and density (>= -1)"},
    {"--ignition", "ignition", "initial fire mask grid (default: bundle or centred 3x3 block)"},
    {"--slope-sign", "slope_sign", "downhill-positive or uphill-positive"},
    {"--slope-units", "slope_units", "degrees or radians"},
    {"--factor-site", "factor_site", "target or source cell supplies vegetation/density"},
    {"--params", "params", "parameter file (key=value)"},
    {"--c1", "c1", "wind speed coefficient"},
    {"--c2", "c2", "wind direction coefficient"},
    {"--a", "a", "slope coefficient"},
    {"--p-h", "p_h", "base spread probability"},
    {"--p-continue", "p_continue", "probability a burning cell keeps burning"},
    {"--seed", "seed", "random seed"},
    {"--steps", "steps", "number of simulation steps"},
    {"--out", "out", "output directory"},
};

struct Subcommand {
  CLI::App* app = nullptr;
  SettingMap values;
  std::vector<std::string> targets;
  std::vector<std::string> predictions;
  bool fixed_epoch_seed = false;
  std::string config;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add(Subcommand& sub, const char* flag, const char* key, const char* help) {
  sub.options.emplace_back(key, sub.app->add_option(flag, sub.values[key], help));
}

void add_world(Subcommand& sub, bool with_threads) {
  for (const auto& o : kWorldOptions) add(sub, o.flag, o.key, o.help);
  if (with_threads) add(sub, "--threads", "threads", "kernel threads (default: $DFIRE_THREADS or all)");
  sub.app->add_option("--config", sub.config, "config file (key=value); flags take precedence");
}

SettingMap given(const Subcommand& sub) {
  SettingMap out;
  for (const auto& [key, opt] : sub.options) {
    if (opt->count() > 0) out[key] = sub.values.at(key);
  }
  if (!sub.targets.empty()) out["targets"] = dfire::cli::join(sub.targets, ',');
  if (!sub.predictions.empty()) out["predictions"] = dfire::cli::join(sub.predictions, ',');
  if (sub.fixed_epoch_seed) out["fixed_epoch_seed"] = "true";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dfire: differentiable cellular-automata wildfire simulator"};
  app.require_subcommand(1);
  std::map<std::string, Subcommand> subs;

  Subcommand& sim = subs["simulate"];
  sim.app = app.add_subcommand("simulate", "run a forward simulation and write its artifacts");
  add_world(sim, true);
  add(sim, "--snapshot-every", "snapshot_every", "write a snapshot every N steps (0 = none)");

  Subcommand& cal = subs["calibrate"];
  cal.app = app.add_subcommand("calibrate", "fit c1, c2, a, p_h to observed fire masks");
  add_world(cal, true);
  add(cal, "--rings", "rings", "gradient step rings r_first,r_between,r_last");
  add(cal, "--lr", "lr", "AdamW learning rate");
  add(cal, "--max-epochs", "max_epochs", "number of epochs");
  add(cal, "--steps-update-interval", "steps_update_interval", "steps between observations");
  cal.app->add_flag("--fixed-epoch-seed", cal.fixed_epoch_seed, "reuse one seed for every epoch");
  cal.app->add_option("--target", cal.targets, "observation mask, in time order (repeatable)");

  Subcommand& met = subs["metrics"];
  met.app = app.add_subcommand("metrics", "compare predicted and observed fire masks");
  met.app->add_option("--pred", met.predictions, "predicted mask, in time order (repeatable)");
  met.app->add_option("--target", met.targets, "observed mask, in time order (repeatable)");

  Subcommand& bench = subs["bench"];
  bench.app = app.add_subcommand("bench", "time forward simulations on flat synthetic maps");
  add(bench, "--sizes", "sizes", "comma-separated map sides");
  add(bench, "--threads", "thread_list", "comma-separated thread counts");
  add(bench, "--steps", "steps", "steps per run");
  add(bench, "--seed", "seed", "random seed");
  add(bench, "--warmup", "warmup", "untimed runs per configuration");
  add(bench, "--repeats", "repeats", "timed runs per configuration (mean reported)");
  add(bench, "--wind-speed", "wind_speed", "fixed wind speed, m/s");
  add(bench, "--wind-direction", "wind_direction", "fixed wind direction, degrees");
  bench.app->add_option("--config", bench.config, "config file (key=value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? dfire::cli::kExitOk : dfire::cli::kExitBadInput;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.app->parsed()) continue;
    std::optional<std::filesystem::path> config;
    if (!sub.config.empty()) config = sub.config;
    dfire::cli::RunConfig cfg;
    try {
      cfg = dfire::cli::resolve_config(name, given(sub), config);
    } catch (const std::exception& e) {
      std::cerr << "dfire: bad input: " << e.what() << "\n";
      return dfire::cli::kExitBadInput;
    }
    return dfire::cli::dispatch(cfg, std::cout, std::cerr);
  }
  return dfire::cli::kExitBadInput;
}
