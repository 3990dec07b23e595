#include "dfire/report_writers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dfire/landscape_bundle.hpp"

namespace dfire {

namespace {

constexpr double kSteepDegrees = 45.0;

double fuel(const Landscape& land, std::size_t r, std::size_t c) {
  return std::max(0.0, (1.0 + land.canopy(r, c)) * (1.0 + land.density(r, c)));
}

}  // namespace

Rgb background_color(const Landscape& land, std::size_t r, std::size_t c, double max_fuel) {
  double steep = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) steep = std::max(steep, std::abs(land.slope(r, c, i, j)));
  }
  const double veg = max_fuel > 0.0 ? std::min(1.0, fuel(land, r, c) / max_fuel) : 0.0;
  const double mix = 0.5 * veg + 0.5 * std::min(1.0, steep / kSteepDegrees);
  Rgb out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double v = kSparseColor[k] * (1.0 - mix) + kDenseColor[k] * mix;
    out[k] = static_cast<std::uint8_t>(std::lround(v));
  }
  return out;
}

std::vector<std::uint8_t> render_snapshot(const FireState& state, const Landscape& land) {
  const std::size_t rows = state.rows();
  const std::size_t cols = state.cols();
  if (land.rows() != rows || land.cols() != cols) {
    throw std::invalid_argument("render_snapshot: state and landscape sizes differ");
  }
  double max_fuel = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) max_fuel = std::max(max_fuel, fuel(land, r, c));
  }
  const std::string header = "P6\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + rows * cols * 3);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      Rgb px = background_color(land, r, c, max_fuel);
      if (state.burning(r, c)) px = kBurningColor;
      if (state.burned(r, c)) px = kBurnedColor;
      out.insert(out.end(), px.begin(), px.end());
    }
  }
  return out;
}

void write_snapshot(const FireState& state, const Landscape& land, const std::filesystem::path& path) {
  const auto bytes = render_snapshot(state, land);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write snapshot " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string series_csv(std::span<const StepRecord> series, std::optional<std::span<const double>> jaccard) {
  if (jaccard && jaccard->size() != series.size()) {
    throw std::invalid_argument("series_csv: jaccard column length differs from series");
  }
  std::string out = jaccard ? "step,burning,burned,affected,jaccard\n" : "step,burning,burned,affected\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const StepRecord& s = series[i];
    out += std::to_string(s.step) + ',' + std::to_string(s.burning) + ',' + std::to_string(s.burned) +
           ',' + std::to_string(s.affected);
    if (jaccard) out += ',' + format_real((*jaccard)[i]);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_series_csv(std::span<const StepRecord> series, const std::filesystem::path& path,
                      std::optional<std::span<const double>> jaccard) {
  write_text_file(path, series_csv(series, jaccard));
}

}  // namespace dfire
