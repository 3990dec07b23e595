#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfire/landscape_bundle.hpp"
#include "dfire/model.hpp"
#include "dfire/propagation.hpp"
#include "dfire/raster_ops.hpp"
#include "dfire/synthetic.hpp"

namespace dfire::cli {

/// Bad flag values or inconsistent settings; exit status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings as text, keyed by config-file key. Later layers win.
using SettingMap = std::map<std::string, std::string>;

struct RunConfig {
  std::string subcommand;
  std::optional<std::filesystem::path> landscape;
  SyntheticSpec synthetic;
  std::size_t size = 64;
  double wind_speed = 4.0;
  double wind_direction = 45.0;
  double fuel_offset = 0.0;
  std::optional<std::filesystem::path> ignition;

  ModelParams params;
  std::optional<std::filesystem::path> params_file;
  int steps = 100;
  std::uint64_t seed = 0;
  StepRingsConfig rings;
  double lr = 5e-3;
  int max_epochs = 10;
  int steps_update_interval = 1;
  bool fixed_epoch_seed = false;
  int snapshot_every = 0;
  std::filesystem::path out = "dfire_out";
  int threads = 0;
  FactorSite factor_site = FactorSite::kTarget;
  SlopeSign slope_sign = SlopeSign::kDownhillPositive;
  SlopeUnits slope_units = SlopeUnits::kDegrees;

  std::vector<std::filesystem::path> targets;
  std::vector<std::filesystem::path> predictions;
  std::vector<std::size_t> bench_sizes{64, 128, 200};
  std::vector<int> bench_threads{1};
  int bench_warmup = 1;
  int bench_repeats = 1;

  KernelOptions kernel() const;
  /// Effective settings echoed into manifests; order is fixed.
  KeyValueFile describe() const;
};

/// Built-in defaults for every recognised key.
SettingMap default_settings();

/// Merges defaults < config file < flags and validates the result.
RunConfig resolve_config(const std::string& subcommand, const SettingMap& flags,
                         const std::optional<std::filesystem::path>& config_file);

KeyValueFile params_record(const ModelParams& params);
ModelParams params_from_record(const KeyValueFile& record, const ModelParams& fallback);

std::string join(const std::vector<std::string>& parts, char sep);
std::vector<std::string> split(const std::string& text, char sep);

}  // namespace dfire::cli
