#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dfire/model.hpp"
#include "dfire/raster_ops.hpp"

namespace dfire {

/// Ordered key=value text record (one pair per line, '#' comments).
class KeyValueFile {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  std::string to_string() const;
  static KeyValueFile parse(const std::string& text);
  static KeyValueFile load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

class BundleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directory layout: wind_speed.ptfg, wind_direction.ptfg, slope.ptfg (or
// altitude.ptfg), canopy.ptfg, density.ptfg and manifest.txt.
inline constexpr const char* kBundleManifest = "manifest.txt";

struct LoadedBundle {
  Landscape landscape;
  KeyValueFile manifest;
  std::optional<MaskGrid> initial_fire;  // initial_fire.ptfg when present
};

LoadedBundle load_landscape_bundle(const std::filesystem::path& dir,
                                   SlopeSign sign = SlopeSign::kDownhillPositive);

void save_landscape_bundle(const Landscape& land, const std::filesystem::path& dir,
                           const KeyValueFile& extra = {},
                           const MaskGrid* initial_fire = nullptr);

}  // namespace dfire
