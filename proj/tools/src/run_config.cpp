#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

namespace dfire::cli {

namespace {

const std::set<std::string> kKnownKeys{
    "landscape", "synthetic", "size", "wind_speed", "wind_direction", "fuel_offset", "ignition", "params",
    "c1", "c2", "a", "p_h", "p_continue", "steps", "seed", "rings", "lr", "max_epochs",
    "steps_update_interval", "fixed_epoch_seed", "snapshot_every", "out", "threads",
    "factor_site", "slope_sign", "slope_units", "targets", "predictions", "sizes",
    "thread_list", "warmup", "repeats"};

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
  throw ConfigError("invalid value for " + key + ": '" + value + "' (expected " + want + ")");
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    bad_value(key, text, "an integer");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
    bad_value(key, text, "a finite number");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  bad_value(key, text, "true or false");
}

template <typename T>
void require(bool ok, const std::string& key, const T& value, const char* want) {
  if (!ok) {
    if constexpr (std::is_convertible_v<T, std::string>) {
      bad_value(key, value, want);
    } else {
      bad_value(key, std::to_string(value), want);
    }
  }
}

const char* factor_site_name(FactorSite s) { return s == FactorSite::kTarget ? "target" : "source"; }
const char* slope_sign_name(SlopeSign s) { return s == SlopeSign::kDownhillPositive ? "downhill-positive" : "uphill-positive"; }
const char* slope_units_name(SlopeUnits u) { return u == SlopeUnits::kDegrees ? "degrees" : "radians"; }

std::vector<std::filesystem::path> paths(const std::string& text) {
  std::vector<std::filesystem::path> out;
  for (const auto& part : split(text, ',')) out.emplace_back(part);
  return out;
}

std::string join_paths(const std::vector<std::filesystem::path>& items) {
  std::vector<std::string> parts;
  for (const auto& p : items) parts.push_back(p.string());
  return join(parts, ',');
}

}  // namespace

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

SettingMap default_settings() {
  SettingMap d{
      {"synthetic", "flat"},     {"size", "64"},
      {"wind_speed", "4"},       {"wind_direction", "45"},
      {"fuel_offset", "0"},
      {"steps", "100"},          {"seed", "0"},
      {"rings", "2,5,10"},       {"lr", "0.005"},
      {"max_epochs", "10"},      {"steps_update_interval", "1"},
      {"fixed_epoch_seed", "false"}, {"snapshot_every", "0"},
      {"out", "dfire_out"},      {"threads", "0"},
      {"factor_site", "target"}, {"slope_sign", "downhill-positive"},
      {"slope_units", "degrees"}, {"sizes", "64,128,200"},
      {"thread_list", "1"},      {"warmup", "1"},
      {"repeats", "1"},
  };
  if (const char* env = std::getenv("DFIRE_THREADS"); env && *env) d["threads"] = env;
  return d;
}

KernelOptions RunConfig::kernel() const {
  KernelOptions k;
  k.factor_site = factor_site;
  k.slope_units = slope_units;
  k.threads = threads;
  return k;
}

KeyValueFile params_record(const ModelParams& params) {
  KeyValueFile kv;
  kv.set("c1", params.c1);
  kv.set("c2", params.c2);
  kv.set("a", params.a);
  kv.set("p_h", params.p_h);
  kv.set("p_continue", params.p_continue);
  return kv;
}

ModelParams params_from_record(const KeyValueFile& record, const ModelParams& fallback) {
  ModelParams p = fallback;
  auto take = [&](const char* key, double& field) {
    if (auto v = record.get(key)) field = parse_real(key, *v);
  };
  take("c1", p.c1);
  take("c2", p.c2);
  take("a", p.a);
  take("p_h", p.p_h);
  take("p_continue", p.p_continue);
  return p;
}

KeyValueFile RunConfig::describe() const {
  KeyValueFile kv;
  kv.set("subcommand", subcommand);
  if (landscape) {
    kv.set("landscape", landscape->string());
  } else {
    kv.set("synthetic", synthetic_name(synthetic));
    kv.set("size", static_cast<long long>(size));
    kv.set("wind_speed", wind_speed);
    kv.set("wind_direction", wind_direction);
    kv.set("fuel_offset", fuel_offset);
  }
  if (ignition) kv.set("ignition", ignition->string());
  if (params_file) kv.set("params", params_file->string());
  const KeyValueFile record = params_record(params);
  for (const auto& [k, v] : record.entries()) kv.set(k, v);
  kv.set("steps", static_cast<long long>(steps));
  kv.set("seed", std::to_string(seed));
  kv.set("rings", std::to_string(rings.r_first) + "," + std::to_string(rings.r_between) + "," +
                      std::to_string(rings.r_last));
  kv.set("lr", lr);
  kv.set("max_epochs", static_cast<long long>(max_epochs));
  kv.set("steps_update_interval", static_cast<long long>(steps_update_interval));
  kv.set("fixed_epoch_seed", fixed_epoch_seed ? "true" : "false");
  kv.set("snapshot_every", static_cast<long long>(snapshot_every));
  kv.set("factor_site", factor_site_name(factor_site));
  kv.set("slope_sign", slope_sign_name(slope_sign));
  kv.set("slope_units", slope_units_name(slope_units));
  if (!targets.empty()) kv.set("targets", join_paths(targets));
  if (!predictions.empty()) kv.set("predictions", join_paths(predictions));
  // thread count and output directory are deliberately left out: results
  // must not depend on them.
  return kv;
}

RunConfig resolve_config(const std::string& subcommand, const SettingMap& flags,
                         const std::optional<std::filesystem::path>& config_file) {
  SettingMap s = default_settings();
  if (config_file) {
    KeyValueFile file;
    try {
      file = KeyValueFile::load(*config_file);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config file: ") + e.what());
    }
    for (const auto& [k, v] : file.entries()) {
      if (!kKnownKeys.contains(k)) throw ConfigError("config file: unknown key '" + k + "'");
      s[k] = v;
    }
  }
  for (const auto& [k, v] : flags) s[k] = v;

  auto has = [&](const char* key) { return s.contains(key); };
  RunConfig cfg;
  cfg.subcommand = subcommand;

  if (has("landscape")) cfg.landscape = s["landscape"];
  try {
    cfg.synthetic = parse_synthetic(s["synthetic"]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto size = parse_integer<long long>("size", s["size"]);
  require(size >= 1 && size <= 100000, "size", s["size"], "an integer in [1, 100000]");
  cfg.size = static_cast<std::size_t>(size);
  cfg.wind_speed = parse_real("wind_speed", s["wind_speed"]);
  require(cfg.wind_speed >= 0.0, "wind_speed", s["wind_speed"], "a non-negative number");
  cfg.wind_direction = parse_real("wind_direction", s["wind_direction"]);
  cfg.fuel_offset = parse_real("fuel_offset", s["fuel_offset"]);
  require(cfg.fuel_offset >= -1.0, "fuel_offset", s["fuel_offset"], "a number >= -1");
  if (has("ignition")) cfg.ignition = s["ignition"];

  if (has("params")) {
    cfg.params_file = s["params"];
    try {
      cfg.params = params_from_record(KeyValueFile::load(*cfg.params_file), cfg.params);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("params file: ") + e.what());
    }
  }
  KeyValueFile inline_params;
  for (const char* key : {"c1", "c2", "a", "p_h", "p_continue"}) {
    if (has(key)) inline_params.set(key, s[key]);
  }
  cfg.params = params_from_record(inline_params, cfg.params);
  if (const auto report = validate_params(cfg.params); !report.ok()) {
    throw ConfigError("invalid parameters: " + report.summary());
  }

  cfg.steps = parse_integer<int>("steps", s["steps"]);
  require(cfg.steps >= 0, "steps", s["steps"], "a non-negative integer");
  cfg.seed = parse_integer<std::uint64_t>("seed", s["seed"]);

  const auto ring_parts = split(s["rings"], ',');
  require(ring_parts.size() == 3, "rings", s["rings"], "r_first,r_between,r_last");
  cfg.rings = {parse_integer<int>("rings", ring_parts[0]), parse_integer<int>("rings", ring_parts[1]),
               parse_integer<int>("rings", ring_parts[2])};
  require(cfg.rings.r_first >= 0 && cfg.rings.r_between >= 0 && cfg.rings.r_last >= 0, "rings",
          s["rings"], "non-negative ring sizes");

  cfg.lr = parse_real("lr", s["lr"]);
  require(cfg.lr >= 0.0, "lr", s["lr"], "a non-negative number");
  cfg.max_epochs = parse_integer<int>("max_epochs", s["max_epochs"]);
  require(cfg.max_epochs >= 0, "max_epochs", s["max_epochs"], "a non-negative integer");
  cfg.steps_update_interval = parse_integer<int>("steps_update_interval", s["steps_update_interval"]);
  require(cfg.steps_update_interval >= 1, "steps_update_interval", s["steps_update_interval"],
          "a positive integer");
  cfg.fixed_epoch_seed = parse_bool("fixed_epoch_seed", s["fixed_epoch_seed"]);
  cfg.snapshot_every = parse_integer<int>("snapshot_every", s["snapshot_every"]);
  require(cfg.snapshot_every >= 0, "snapshot_every", s["snapshot_every"], "a non-negative integer");
  cfg.out = s["out"];
  cfg.threads = parse_integer<int>("threads", s["threads"]);
  require(cfg.threads >= 0 && cfg.threads <= 1024, "threads", s["threads"], "an integer in [0, 1024]");

  const std::string& site = s["factor_site"];
  if (site == "target") cfg.factor_site = FactorSite::kTarget;
  else if (site == "source") cfg.factor_site = FactorSite::kSource;
  else bad_value("factor_site", site, "target or source");
  const std::string& sign = s["slope_sign"];
  if (sign == "downhill-positive") cfg.slope_sign = SlopeSign::kDownhillPositive;
  else if (sign == "uphill-positive") cfg.slope_sign = SlopeSign::kUphillPositive;
  else bad_value("slope_sign", sign, "downhill-positive or uphill-positive");
  const std::string& units = s["slope_units"];
  if (units == "degrees") cfg.slope_units = SlopeUnits::kDegrees;
  else if (units == "radians") cfg.slope_units = SlopeUnits::kRadians;
  else bad_value("slope_units", units, "degrees or radians");

  if (has("targets")) cfg.targets = paths(s["targets"]);
  if (has("predictions")) cfg.predictions = paths(s["predictions"]);

  cfg.bench_sizes.clear();
  for (const auto& part : split(s["sizes"], ',')) {
    const auto n = parse_integer<long long>("sizes", part);
    require(n >= 1, "sizes", part, "positive sizes");
    cfg.bench_sizes.push_back(static_cast<std::size_t>(n));
  }
  cfg.bench_threads.clear();
  for (const auto& part : split(s["thread_list"], ',')) {
    const int n = parse_integer<int>("thread_list", part);
    require(n >= 1 && n <= 1024, "thread_list", part, "thread counts in [1, 1024]");
    cfg.bench_threads.push_back(n);
  }
  require(!cfg.bench_sizes.empty(), "sizes", s["sizes"], "at least one size");
  require(!cfg.bench_threads.empty(), "thread_list", s["thread_list"], "at least one thread count");
  cfg.bench_warmup = parse_integer<int>("warmup", s["warmup"]);
  require(cfg.bench_warmup >= 0, "warmup", s["warmup"], "a non-negative integer");
  cfg.bench_repeats = parse_integer<int>("repeats", s["repeats"]);
  require(cfg.bench_repeats >= 1, "repeats", s["repeats"], "a positive integer");
  return cfg;
}

}  // namespace dfire::cli
