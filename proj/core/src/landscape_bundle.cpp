#include "dfire/landscape_bundle.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dfire/grid_file.hpp"

namespace dfire {

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KeyValueFile::set(const std::string& key, double value) { set(key, format_real(value)); }

void KeyValueFile::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  double out = 0.0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) {
    throw BundleError("manifest value for '" + key + "' is not a number: " + *v);
  }
  return out;
}

std::string KeyValueFile::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw BundleError("line " + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    kv.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BundleError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

void KeyValueFile::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BundleError("cannot write " + path.string());
  out << to_string();
  if (!out) throw BundleError("write failed for " + path.string());
}

namespace {

RealGrid require_real(const std::filesystem::path& dir, const char* name) {
  const auto path = dir / (std::string(name) + ".ptfg");
  if (!std::filesystem::exists(path)) {
    throw BundleError("missing grid '" + std::string(name) + "' (" + path.string() + ")");
  }
  return read_real_grid(path);
}

}  // namespace

LoadedBundle load_landscape_bundle(const std::filesystem::path& dir, SlopeSign sign) {
  if (!std::filesystem::is_directory(dir)) {
    throw BundleError("landscape bundle directory not found: " + dir.string());
  }
  LoadedBundle bundle;
  const auto manifest_path = dir / kBundleManifest;
  if (std::filesystem::exists(manifest_path)) bundle.manifest = KeyValueFile::load(manifest_path);

  Landscape& land = bundle.landscape;
  land.cell_side = bundle.manifest.get_double("cell_side", 30.0);
  land.wind_speed = require_real(dir, "wind_speed");
  land.wind_direction = require_real(dir, "wind_direction");
  land.canopy = require_real(dir, "canopy");
  land.density = require_real(dir, "density");
  if (std::filesystem::exists(dir / "slope.ptfg") || !std::filesystem::exists(dir / "altitude.ptfg")) {
    land.slope = require_real(dir, "slope");
  } else {
    land.slope = slope_from_altitude(require_real(dir, "altitude"), land.cell_side, sign);
  }
  if (std::filesystem::exists(dir / "initial_fire.ptfg")) {
    bundle.initial_fire = read_mask_grid(dir / "initial_fire.ptfg");
  }
  return bundle;
}

void save_landscape_bundle(const Landscape& land, const std::filesystem::path& dir,
                           const KeyValueFile& extra, const MaskGrid* initial_fire) {
  std::filesystem::create_directories(dir);
  write_real_grid(land.wind_speed, dir / "wind_speed.ptfg");
  write_real_grid(land.wind_direction, dir / "wind_direction.ptfg");
  write_real_grid(land.slope, dir / "slope.ptfg");
  write_real_grid(land.canopy, dir / "canopy.ptfg");
  write_real_grid(land.density, dir / "density.ptfg");
  if (initial_fire) write_grid(*initial_fire, dir / "initial_fire.ptfg");
  KeyValueFile manifest;
  manifest.set("cell_side", land.cell_side);
  manifest.set("rows", static_cast<long long>(land.rows()));
  manifest.set("cols", static_cast<long long>(land.cols()));
  for (const auto& [k, v] : extra.entries()) manifest.set(k, v);
  manifest.save(dir / kBundleManifest);
}

}  // namespace dfire
