#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "dfire/grid_file.hpp"

using namespace dfire;

namespace {

Shape random_shape(std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> rank(1, kGridMaxRank);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  Shape shape(rank(gen));
  for (auto& d : shape) d = dim(gen);
  return shape;
}

GridFileErrc decode_error(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_grid(bytes);
  } catch (const GridFileError& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return GridFileErrc::kIo;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dfire_grid_test_" + name);
}

}  // namespace

TEST(GridFile, GoldenFloatBytes) {
  const FloatGrid g(Shape{2, 2}, std::vector<float>{1.0f, -2.0f, 0.5f, 0.0f});
  const std::vector<std::uint8_t> want{
      'P', 'T', 'F', 'G', 0x01, 0x00, 0x00, 0x02, 0x02, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00,
      0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0, 0x00, 0x00, 0x00, 0x3f, 0x00, 0x00, 0x00, 0x00};
  EXPECT_EQ(encode_grid(g), want);
}

TEST(GridFile, GoldenBoolBytes) {
  const MaskGrid m(Shape{3}, std::vector<std::uint8_t>{1, 0, 1});
  const std::vector<std::uint8_t> want{'P', 'T', 'F', 'G', 0x01, 0x00, 0x01, 0x01,
                                       0x03, 0x00, 0x00, 0x00, 0x01, 0x00, 0x01};
  EXPECT_EQ(encode_grid(m), want);
}

TEST(GridFile, RandomRoundTripAllDtypesAndRanks) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<float> value(0.0f, 100.0f);
  std::bernoulli_distribution bit(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    const Shape shape = random_shape(gen);
    FloatGrid f(shape);
    for (auto& v : f.values()) v = value(gen);
    if (trial == 0) {
      f[0] = std::numeric_limits<float>::infinity();
      if (f.size() > 1) f[1] = -0.0f;
    }
    const auto back_f = std::get<FloatGrid>(decode_grid(encode_grid(f)));
    EXPECT_EQ(back_f.shape(), f.shape());
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint32_t>(back_f[i]), std::bit_cast<std::uint32_t>(f[i]));
    }
    MaskGrid m(shape);
    for (auto& v : m.values()) v = bit(gen) ? 1 : 0;
    EXPECT_EQ(std::get<MaskGrid>(decode_grid(encode_grid(m))), m);
  }
}

TEST(GridFile, NanPayloadSurvives) {
  FloatGrid f(Shape{2}, std::vector<float>{std::numeric_limits<float>::quiet_NaN(), 1.0f});
  const auto back = std::get<FloatGrid>(decode_grid(encode_grid(f)));
  EXPECT_TRUE(std::isnan(back[0]));
}

TEST(GridFile, FileRoundTripAndRealWidening) {
  const auto path = temp_path("real.ptfg");
  RealGrid r = RealGrid::grid(3, 4);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.25 * static_cast<double>(i) - 1.0;
  write_real_grid(r, path);
  EXPECT_EQ(read_real_grid(path), r);
  EXPECT_THROW(read_mask_grid(path), GridFileError);
  try {
    read_mask_grid(path);
  } catch (const GridFileError& e) {
    EXPECT_EQ(e.code(), GridFileErrc::kDtypeMismatch);
  }
  const auto mpath = temp_path("mask.ptfg");
  write_grid(MaskGrid::grid(2, 2, 1), mpath);
  try {
    read_real_grid(mpath);
    ADD_FAILURE();
  } catch (const GridFileError& e) {
    EXPECT_EQ(e.code(), GridFileErrc::kDtypeMismatch);
  }
  std::filesystem::remove(path);
  std::filesystem::remove(mpath);
}

TEST(GridFile, MissingFileIsIoError) {
  try {
    read_grid(temp_path("does_not_exist.ptfg"));
    ADD_FAILURE();
  } catch (const GridFileError& e) {
    EXPECT_EQ(e.code(), GridFileErrc::kIo);
  }
}

TEST(GridFile, MalformedInputsReportTypedErrors) {
  const auto good = encode_grid(MaskGrid(Shape{2, 3}, 1));

  auto bytes = good;
  bytes[0] = 'X';
  EXPECT_EQ(decode_error(bytes), GridFileErrc::kBadMagic);
  EXPECT_EQ(decode_error({'P', 'T'}), GridFileErrc::kBadMagic);

  bytes = good;
  bytes[4] = 2;
  EXPECT_EQ(decode_error(bytes), GridFileErrc::kUnsupportedVersion);

  bytes = good;
  bytes[6] = 7;
  EXPECT_EQ(decode_error(bytes), GridFileErrc::kBadHeader);

  bytes = good;
  bytes[7] = 0;
  EXPECT_EQ(decode_error(bytes), GridFileErrc::kBadHeader);
  bytes[7] = 5;
  EXPECT_EQ(decode_error(bytes), GridFileErrc::kBadHeader);

  EXPECT_EQ(decode_error({good.begin(), good.begin() + 6}), GridFileErrc::kTruncated);
  EXPECT_EQ(decode_error({good.begin(), good.begin() + 10}), GridFileErrc::kTruncated);
  EXPECT_EQ(decode_error({good.begin(), good.end() - 1}), GridFileErrc::kTruncated);

  bytes = good;
  bytes.push_back(0);
  EXPECT_EQ(decode_error(bytes), GridFileErrc::kTrailingData);
}

TEST(GridFile, HugeDimensionsAreTruncatedNotAllocated) {
  std::vector<std::uint8_t> bytes{'P', 'T', 'F', 'G', 1, 0, 0, 4};
  for (int i = 0; i < 4; ++i) {
    for (int b = 0; b < 4; ++b) bytes.push_back(0xff);
  }
  EXPECT_EQ(decode_error(bytes), GridFileErrc::kTruncated);
}

TEST(GridFile, ZeroExtentGrid) {
  const MaskGrid m(Shape{0, 5});
  const auto back = std::get<MaskGrid>(decode_grid(encode_grid(m)));
  EXPECT_EQ(back.shape(), m.shape());
  EXPECT_TRUE(back.empty());
}

TEST(GridFile, EncodeRejectsBadRank) {
  EXPECT_THROW(encode_grid(MaskGrid(Shape{1, 1, 1, 1, 1})), GridFileError);
  EXPECT_THROW(encode_grid(MaskGrid(Shape{})), GridFileError);
}
