#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "dfire/array.hpp"

namespace dfire {

// Binary grid container, little-endian throughout:
//   "PTFG" | u16 version | u8 dtype | u8 rank | rank x u32 dims | payload
// Payload is row-major (last axis fastest); dtype 0 is IEEE-754 float32,
// dtype 1 is one byte per boolean.

inline constexpr char kGridMagic[4] = {'P', 'T', 'F', 'G'};
inline constexpr std::uint16_t kGridFileVersion = 1;
inline constexpr std::size_t kGridMaxRank = 4;

enum class GridDtype : std::uint8_t { kFloat32 = 0, kBool = 1 };

enum class GridFileErrc {
  kIo,
  kBadMagic,
  kUnsupportedVersion,
  kBadHeader,
  kTruncated,
  kTrailingData,
  kDtypeMismatch,
};

class GridFileError : public std::runtime_error {
 public:
  GridFileError(GridFileErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  GridFileErrc code() const noexcept { return code_; }

 private:
  GridFileErrc code_;
};

using FloatGrid = Array<float>;
using GridData = std::variant<FloatGrid, MaskGrid>;

std::vector<std::uint8_t> encode_grid(const GridData& grid);
GridData decode_grid(std::span<const std::uint8_t> bytes);

void write_grid(const GridData& grid, const std::filesystem::path& path);
GridData read_grid(const std::filesystem::path& path);

/// Reads a float32 grid and widens it; throws kDtypeMismatch on boolean files.
RealGrid read_real_grid(const std::filesystem::path& path);
/// Reads a boolean grid; throws kDtypeMismatch on float files.
MaskGrid read_mask_grid(const std::filesystem::path& path);
/// Narrows to float32 and writes.
void write_real_grid(const RealGrid& grid, const std::filesystem::path& path);

FloatGrid to_float(const RealGrid& grid);
RealGrid to_double(const FloatGrid& grid);

}  // namespace dfire
