#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfire/model.hpp"
#include "dfire/propagation.hpp"

namespace dfire {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kBurningColor{255, 0, 0};
inline constexpr Rgb kBurnedColor{0, 0, 0};
inline constexpr Rgb kSparseColor{128, 0, 128};  // low vegetation, gentle slope
inline constexpr Rgb kDenseColor{0, 160, 0};     // dense vegetation, steep slope

/// Background color of one cell: vegetation and steepness mixed on a
/// purple-to-green ramp. Never equals the burning or burned colors.
Rgb background_color(const Landscape& land, std::size_t row, std::size_t col, double max_fuel);

/// Binary PPM (P6). Burned cells are drawn over burning cells, which are
/// drawn over the landscape background.
std::vector<std::uint8_t> render_snapshot(const FireState& state, const Landscape& land);
void write_snapshot(const FireState& state, const Landscape& land, const std::filesystem::path& path);

/// CSV with header step,burning,burned,affected[,jaccard] and LF endings.
std::string series_csv(std::span<const StepRecord> series,
                       std::optional<std::span<const double>> jaccard = std::nullopt);
void write_series_csv(std::span<const StepRecord> series, const std::filesystem::path& path,
                      std::optional<std::span<const double>> jaccard = std::nullopt);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dfire
