#include "dfire/grid_file.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace dfire {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_header(std::vector<std::uint8_t>& out, GridDtype dtype, const Shape& shape) {
  if (shape.empty() || shape.size() > kGridMaxRank) {
    throw GridFileError(GridFileErrc::kBadHeader,
                        "grid rank " + std::to_string(shape.size()) + " outside 1..4");
  }
  out.insert(out.end(), std::begin(kGridMagic), std::end(kGridMagic));
  put_u16(out, kGridFileVersion);
  out.push_back(static_cast<std::uint8_t>(dtype));
  out.push_back(static_cast<std::uint8_t>(shape.size()));
  for (auto d : shape) {
    if (d > 0xFFFFFFFFu) throw GridFileError(GridFileErrc::kBadHeader, "grid dimension too large");
    put_u32(out, static_cast<std::uint32_t>(d));
  }
}

}  // namespace

std::vector<std::uint8_t> encode_grid(const GridData& grid) {
  std::vector<std::uint8_t> out;
  if (const auto* f = std::get_if<FloatGrid>(&grid)) {
    put_header(out, GridDtype::kFloat32, f->shape());
    out.reserve(out.size() + f->size() * 4);
    for (float v : f->values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  } else {
    const auto& m = std::get<MaskGrid>(grid);
    put_header(out, GridDtype::kBool, m.shape());
    out.insert(out.end(), m.values().begin(), m.values().end());
  }
  return out;
}

GridData decode_grid(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kGridMagic, 4) != 0) {
    throw GridFileError(GridFileErrc::kBadMagic, "not a grid file (bad magic)");
  }
  if (bytes.size() < 8) throw GridFileError(GridFileErrc::kTruncated, "grid header truncated");
  const auto version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kGridFileVersion) {
    throw GridFileError(GridFileErrc::kUnsupportedVersion,
                        "unsupported grid file version " + std::to_string(version));
  }
  const std::uint8_t dtype = bytes[6];
  const std::size_t rank = bytes[7];
  if (dtype > 1) {
    throw GridFileError(GridFileErrc::kBadHeader, "unknown dtype code " + std::to_string(dtype));
  }
  if (rank == 0 || rank > kGridMaxRank) {
    throw GridFileError(GridFileErrc::kBadHeader, "grid rank " + std::to_string(rank) + " outside 1..4");
  }
  const std::size_t header = 8 + 4 * rank;
  if (bytes.size() < header) throw GridFileError(GridFileErrc::kTruncated, "grid dims truncated");
  Shape shape(rank);
  for (std::size_t i = 0; i < rank; ++i) shape[i] = get_u32(bytes.data() + 8 + 4 * i);

  const std::size_t width = dtype == 0 ? 4 : 1;
  std::size_t count = std::find(shape.begin(), shape.end(), 0) == shape.end() ? 1 : 0;
  for (auto d : shape) {
    if (d != 0 && count > bytes.size() / d) {
      throw GridFileError(GridFileErrc::kTruncated, "grid payload truncated: dims " +
                                                        shape_to_string(shape) + " exceed file size");
    }
    count *= d;
  }
  const std::size_t expected = header + count * width;
  if (bytes.size() < expected) {
    throw GridFileError(GridFileErrc::kTruncated,
                        "grid payload truncated: " + std::to_string(bytes.size() - header) +
                            " of " + std::to_string(count * width) + " bytes");
  }
  if (bytes.size() > expected) {
    throw GridFileError(GridFileErrc::kTrailingData, "unexpected bytes after grid payload");
  }
  const std::uint8_t* payload = bytes.data() + header;
  if (dtype == 0) {
    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = std::bit_cast<float>(get_u32(payload + 4 * i));
    return FloatGrid(std::move(shape), std::move(values));
  }
  return MaskGrid(std::move(shape), std::vector<std::uint8_t>(payload, payload + count));
}

void write_grid(const GridData& grid, const std::filesystem::path& path) {
  const auto bytes = encode_grid(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GridFileError(GridFileErrc::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw GridFileError(GridFileErrc::kIo, "write failed for " + path.string());
}

GridData read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GridFileError(GridFileErrc::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_grid(bytes);
  } catch (const GridFileError& e) {
    throw GridFileError(e.code(), path.string() + ": " + e.what());
  }
}

FloatGrid to_float(const RealGrid& grid) {
  std::vector<float> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = static_cast<float>(grid[i]);
  return FloatGrid(grid.shape(), std::move(values));
}

RealGrid to_double(const FloatGrid& grid) {
  std::vector<double> values(grid.values().begin(), grid.values().end());
  return RealGrid(grid.shape(), std::move(values));
}

RealGrid read_real_grid(const std::filesystem::path& path) {
  GridData data = read_grid(path);
  if (auto* f = std::get_if<FloatGrid>(&data)) return to_double(*f);
  throw GridFileError(GridFileErrc::kDtypeMismatch, path.string() + ": expected float32 grid, found bool");
}

MaskGrid read_mask_grid(const std::filesystem::path& path) {
  GridData data = read_grid(path);
  if (auto* m = std::get_if<MaskGrid>(&data)) return std::move(*m);
  throw GridFileError(GridFileErrc::kDtypeMismatch, path.string() + ": expected bool grid, found float32");
}

void write_real_grid(const RealGrid& grid, const std::filesystem::path& path) {
  write_grid(to_float(grid), path);
}

}  // namespace dfire
