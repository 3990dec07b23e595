#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dfire/report_writers.hpp"
#include "dfire/synthetic.hpp"
#include "test_support.hpp"

using namespace dfire;

namespace {

const std::filesystem::path kGolden = DFIRE_GOLDEN_DIR;

}  // namespace

TEST(Snapshot, HandComputedTwoByTwo) {
  const Landscape land = Landscape::uniform(2, 2);
  FireState state = new_fire_state(MaskGrid::grid(2, 2));
  state.burning(0, 0) = 1;
  state.burned(1, 1) = 1;
  state.burning(1, 1) = 1;  // burned wins over burning
  const auto bytes = render_snapshot(state, land);
  const std::string header = "P6\n2 2\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 12);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + static_cast<long>(header.size())), header);
  // neutral fuel is the densest on the map, flat ground: halfway along the ramp
  const std::vector<std::uint8_t> pixels{255, 0, 0, 64, 80, 64, 64, 80, 64, 0, 0, 0};
  EXPECT_TRUE(std::equal(pixels.begin(), pixels.end(), bytes.begin() + static_cast<long>(header.size())));
}

TEST(Snapshot, BackgroundRampEnds) {
  Landscape land = Landscape::uniform(1, 2);
  land.canopy(0, 0) = -1.0;
  land.slope(0, 1, 0, 0) = -60.0;
  EXPECT_EQ(background_color(land, 0, 0, 1.0), kSparseColor);
  EXPECT_EQ(background_color(land, 0, 1, 1.0), kDenseColor);
  EXPECT_THROW(render_snapshot(new_fire_state(MaskGrid::grid(3, 3)), land), std::invalid_argument);
}

TEST(SeriesCsv, HandComputedRows) {
  const std::vector<StepRecord> series{{0, 9, 0, 9}, {1, 12, 3, 15}};
  EXPECT_EQ(series_csv(series), "step,burning,burned,affected\n0,9,0,9\n1,12,3,15\n");
  const std::vector<double> j{1.0, 0.25};
  EXPECT_EQ(series_csv(series, std::span<const double>(j)),
            "step,burning,burned,affected,jaccard\n0,9,0,9,1\n1,12,3,15,0.25\n");
  const std::vector<double> short_j{1.0};
  EXPECT_THROW(series_csv(series, std::span<const double>(short_j)), std::invalid_argument);
}

TEST(Golden, SnapshotAndCsvAreStable) {
  const dfire::testing::GoldenCase golden;
  const auto ppm = golden.snapshot();
  EXPECT_TRUE(dfire::testing::matches_golden(kGolden / "snapshot.ppm", std::string(ppm.begin(), ppm.end())));
  EXPECT_TRUE(dfire::testing::matches_golden(kGolden / "series.csv", golden.csv()));
}

TEST(Synthetic, ParseNames) {
  EXPECT_EQ(parse_synthetic("flat").kind, SyntheticKind::kFlat);
  EXPECT_EQ(parse_synthetic("hill").kind, SyntheticKind::kHill);
  EXPECT_EQ(parse_synthetic("valley").kind, SyntheticKind::kValley);
  const auto r = parse_synthetic("random:77");
  EXPECT_EQ(r.kind, SyntheticKind::kRandom);
  EXPECT_EQ(r.seed, 77u);
  EXPECT_EQ(synthetic_name(r), "random:77");
  for (const char* bad : {"", "Flat", "random", "random:", "random:x", "mountain"}) {
    EXPECT_THROW(parse_synthetic(bad), std::invalid_argument) << bad;
  }
}

TEST(Synthetic, FlatHasNoSlopeAndUniformWind) {
  SyntheticOptions opts;
  opts.fuel_offset = -0.2;
  const Landscape land = make_synthetic({SyntheticKind::kFlat, 0}, 8, 9, opts);
  EXPECT_TRUE(validate_landscape(land).ok());
  for (double v : land.slope.values()) EXPECT_EQ(v, 0.0);
  for (double v : land.wind_speed.values()) EXPECT_EQ(v, opts.wind_speed);
  for (double v : land.canopy.values()) EXPECT_EQ(v, -0.2);
}

TEST(Synthetic, HillPeaksAtCentreAndValleyIsLowInTheMiddle) {
  const RealGrid hill = synthetic_altitude({SyntheticKind::kHill, 0}, 21, 21);
  const double peak = hill(10, 10);
  for (double v : hill.values()) EXPECT_LE(v, peak);
  EXPECT_GT(peak, hill(0, 0));
  EXPECT_EQ(hill(3, 7), hill(7, 3));

  const RealGrid valley = synthetic_altitude({SyntheticKind::kValley, 0}, 15, 21);
  for (std::size_t r = 0; r < 15; ++r) {
    EXPECT_EQ(valley(r, 10), valley(0, 10));
    EXPECT_LT(valley(r, 10), valley(r, 0));
    EXPECT_EQ(valley(r, 4), valley(r, 16));
  }
}

TEST(Synthetic, RandomIsSeededAndBounded) {
  const Landscape a = make_synthetic({SyntheticKind::kRandom, 5}, 16, 16);
  const Landscape b = make_synthetic({SyntheticKind::kRandom, 5}, 16, 16);
  const Landscape c = make_synthetic({SyntheticKind::kRandom, 6}, 16, 16);
  EXPECT_EQ(a.slope, b.slope);
  EXPECT_EQ(a.canopy, b.canopy);
  EXPECT_NE(a.canopy, c.canopy);
  EXPECT_TRUE(validate_landscape(a).ok());
  for (double v : a.canopy.values()) {
    EXPECT_GE(v, -0.3);
    EXPECT_LE(v, 0.3);
  }
}

TEST(Synthetic, CenteredIgnition) {
  const MaskGrid m = centered_ignition(7, 8);
  EXPECT_EQ(count_true(m), 9u);
  EXPECT_EQ(m(2, 2), 1);
  EXPECT_EQ(m(4, 4), 1);
  EXPECT_EQ(m(5, 5), 0);
  EXPECT_EQ(count_true(centered_ignition(2, 2)), 4u);
}
