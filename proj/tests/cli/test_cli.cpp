#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dfire/grid_file.hpp"
#include "dfire/landscape_bundle.hpp"
#include "dfire/metrics.hpp"
#include "test_support.hpp"

using namespace dfire;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = DFIRE_FIXTURE_DIR;
const std::vector<std::string> kTwinSteps{"04", "08", "12", "16", "20", "24", "28", "32"};

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DFIRE_CLI_PATH + "\" " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dfire_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

std::map<std::string, std::string> read_params(const fs::path& path) {
  std::map<std::string, std::string> out;
  const KeyValueFile file = KeyValueFile::load(path);
  for (const auto& [k, v] : file.entries()) out[k] = v;
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(dfire::testing::read_file_bytes(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

std::string twin_targets() {
  std::string out;
  for (const auto& k : kTwinSteps) out += " --target \"" + (kFixtures / "twin" / ("target_" + k + ".ptfg")).string() + "\"";
  return out;
}

std::string twin_config() { return " --config \"" + (kFixtures / "twin" / "twin.cfg").string() + "\""; }

double twin_mean_jaccard(const fs::path& params, const std::string& tag) {
  const MaskGrid target = read_mask_grid(kFixtures / "twin" / "target_32.ptfg");
  double sum = 0.0;
  const std::vector<int> seeds{101, 202, 303, 404, 505};
  for (int seed : seeds) {
    const fs::path out = scratch("twin_eval_" + tag + "_" + std::to_string(seed));
    const auto r = run_cli("simulate" + twin_config() + " --params \"" + params.string() +
                           "\" --steps 32 --seed " + std::to_string(seed) + " --out \"" + out.string() + "\"");
    EXPECT_EQ(r.code, 0) << r.output;
    sum += jaccard_index(target, read_mask_grid(out / "affected.ptfg"));
  }
  return sum / static_cast<double>(seeds.size());
}

void write_mask(const fs::path& path, std::size_t rows, std::size_t cols,
                const std::vector<std::pair<std::size_t, std::size_t>>& on) {
  MaskGrid m = MaskGrid::grid(rows, cols);
  for (auto [r, c] : on) m(r, c) = 1;
  write_grid(m, path);
}

}  // namespace

TEST(CliSimulate, RerunsAreByteIdenticalAcrossThreadCounts) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string common = "simulate --synthetic random:3 --size 40 --steps 25 --seed 11 --snapshot-every 5";
  ASSERT_EQ(run_cli(common + " --threads 1 --out \"" + a.string() + "\"").code, 0);
  ASSERT_EQ(run_cli(common + " --threads 3 --out \"" + b.string() + "\"").code, 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    ASSERT_TRUE(fs::exists(b / name)) << name;
    EXPECT_EQ(dfire::testing::read_file_bytes(entry.path()), dfire::testing::read_file_bytes(b / name)) << name;
    ++files;
  }
  EXPECT_GE(files, 10u);
}

TEST(CliSimulate, ZeroStepsWritesOnlyTheInitialState) {
  const fs::path out = scratch("zero");
  const auto r = run_cli("simulate --synthetic hill --size 20 --steps 0 --snapshot-every 1 --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(read_mask_grid(out / "affected.ptfg"), centered_ignition(20, 20));
  EXPECT_EQ(read_csv(out / "series.csv").size(), 1u);
  EXPECT_TRUE(fs::exists(out / "snapshot_000000.ppm"));
  EXPECT_FALSE(fs::exists(out / "snapshot_000001.ppm"));
}

TEST(CliSimulate, MissingGridIsNamedAndFails) {
  const fs::path bundle = scratch("bundle");
  save_landscape_bundle(Landscape::uniform(6, 6), bundle);
  const auto ok = run_cli("simulate --landscape \"" + bundle.string() + "\" --steps 3 --out \"" +
                          scratch("bundle_out").string() + "\"");
  EXPECT_EQ(ok.code, 0) << ok.output;
  fs::remove(bundle / "density.ptfg");
  const auto r = run_cli("simulate --landscape \"" + bundle.string() + "\" --steps 3 --out \"" +
                         scratch("bundle_out2").string() + "\"");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.output.find("density"), std::string::npos) << r.output;
}

TEST(CliSimulate, RejectsBadValues) {
  EXPECT_EQ(run_cli("simulate --c1 abc").code, 1);
  EXPECT_EQ(run_cli("simulate --no-such-flag").code, 1);
  EXPECT_EQ(run_cli("simulate --p-continue 1.5").code, 1);
  EXPECT_EQ(run_cli("simulate --synthetic mountain").code, 1);
  EXPECT_EQ(run_cli("").code, 1);
}

TEST(CliConfig, FlagsOverrideConfigFileOverDefaults) {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  write_text_file(dir / "run.cfg", "steps=5\nseed=9\nsize=16\n");
  const auto from_file = run_cli("simulate --config \"" + (dir / "run.cfg").string() + "\" --out \"" +
                                 (dir / "a").string() + "\"");
  ASSERT_EQ(from_file.code, 0) << from_file.output;
  const auto manifest_a = read_params(dir / "a" / "manifest.txt");
  EXPECT_EQ(manifest_a.at("steps"), "5");
  EXPECT_EQ(manifest_a.at("seed"), "9");
  EXPECT_EQ(manifest_a.at("size"), "16");
  EXPECT_EQ(manifest_a.at("lr"), "0.005");

  const auto flagged = run_cli("simulate --config \"" + (dir / "run.cfg").string() + "\" --steps 3 --out \"" +
                               (dir / "b").string() + "\"");
  ASSERT_EQ(flagged.code, 0);
  EXPECT_EQ(read_params(dir / "b" / "manifest.txt").at("steps"), "3");
  EXPECT_EQ(read_csv(dir / "b" / "series.csv").size(), 4u);

  write_text_file(dir / "bad.cfg", "stepz=5\n");
  EXPECT_EQ(run_cli("simulate --config \"" + (dir / "bad.cfg").string() + "\"").code, 1);
}

TEST(CliCalibrate, ZeroEpochsReturnsInputParams) {
  const fs::path out = scratch("cal_zero");
  const fs::path init = kFixtures / "twin" / "init_under.txt";
  const auto r = run_cli("calibrate" + twin_config() + " --params \"" + init.string() + "\" --max-epochs 0" +
                         twin_targets() + " --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  const auto got = read_params(out / "best_params.txt");
  const auto want = read_params(init);
  for (const char* key : {"c1", "c2", "a", "p_h", "p_continue"}) {
    EXPECT_DOUBLE_EQ(std::stod(got.at(key)), std::stod(want.at(key))) << key;
  }
  EXPECT_EQ(read_csv(out / "iterations.csv").size(), 1u);
}

TEST(CliCalibrate, ZeroLearningRateWithFixedSeedRepeatsLosses) {
  const fs::path out = scratch("cal_lr0");
  const auto r = run_cli("calibrate" + twin_config() + " --p-h 0.4 --lr 0 --max-epochs 3 --fixed-epoch-seed" +
                         twin_targets() + " --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rows = read_csv(out / "iterations.csv");
  ASSERT_EQ(rows.size(), 1u + 3u * 8u);
  const auto& header = rows[0];
  const auto loss_col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "loss") - header.begin());
  const auto ph_col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "p_h") - header.begin());
  for (std::size_t i = 9; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][loss_col], rows[i - 8][loss_col]);
    EXPECT_EQ(rows[i][ph_col], "0.4");
  }
}

TEST(CliCalibrate, TwinFixtureImprovesFromUnderestimate) {
  const fs::path out = scratch("cal_twin");
  const fs::path init = kFixtures / "twin" / "init_under.txt";
  const auto r = run_cli("calibrate" + twin_config() + " --params \"" + init.string() + "\"" + twin_targets() +
                         " --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  const double before = twin_mean_jaccard(init, "init");
  const double after = twin_mean_jaccard(out / "best_params.txt", "best");
  EXPECT_GE(after, before + 0.2) << before << " -> " << after;
}

TEST(CliCalibrate, FixtureMatchesLibraryTwin) {
  const dfire::testing::TwinSetup twin;
  for (std::size_t k = 0; k < kTwinSteps.size(); ++k) {
    EXPECT_EQ(read_mask_grid(kFixtures / "twin" / ("target_" + kTwinSteps[k] + ".ptfg")),
              twin.schedule.observations[k].target)
        << kTwinSteps[k];
  }
}

TEST(CliCalibrate, RequiresTargets) {
  EXPECT_EQ(run_cli("calibrate --out \"" + scratch("cal_none").string() + "\"").code, 1);
}

TEST(CliMetrics, IdenticalDisjointAndCounts) {
  const fs::path dir = scratch("metrics");
  fs::create_directories(dir);
  write_mask(dir / "a.ptfg", 4, 4, {{0, 0}, {1, 1}, {2, 2}});
  write_mask(dir / "b.ptfg", 4, 4, {{3, 3}});
  write_mask(dir / "c.ptfg", 4, 4, {{0, 0}, {3, 3}});
  write_mask(dir / "small.ptfg", 2, 2, {{0, 0}});
  auto p = [&](const char* n) { return "\"" + (dir / n).string() + "\""; };

  auto r = run_cli(std::string("metrics --pred ") + p("a.ptfg") + " --target " + p("a.ptfg"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("jaccard=1\n"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("manhattan=0\n"), std::string::npos) << r.output;

  r = run_cli(std::string("metrics --pred ") + p("a.ptfg") + " --target " + p("b.ptfg"));
  EXPECT_NE(r.output.find("jaccard=0\n"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("manhattan=2\n"), std::string::npos) << r.output;

  // counts 3,1 against 2,2: |3-2| + |1-2| = 2; final pair b vs c: 1/2
  r = run_cli(std::string("metrics --pred ") + p("a.ptfg") + " --pred " + p("b.ptfg") + " --target " +
              p("c.ptfg") + " --target " + p("c.ptfg"));
  EXPECT_NE(r.output.find("jaccard=0.5\n"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("manhattan=2\n"), std::string::npos) << r.output;

  EXPECT_EQ(run_cli(std::string("metrics --pred ") + p("a.ptfg") + " --target " + p("small.ptfg")).code, 1);
  EXPECT_EQ(run_cli(std::string("metrics --pred ") + p("a.ptfg")).code, 1);
  EXPECT_EQ(run_cli(std::string("metrics --pred ") + p("missing.ptfg") + " --target " + p("a.ptfg")).code, 2);
}

TEST(CliBench, RowsPerSizeWithThreadInvariantHash) {
  const auto r = run_cli("bench --sizes 64,200 --threads 1,2 --steps 20 --warmup 0 --repeats 1");
  ASSERT_EQ(r.code, 0) << r.output;
  std::istringstream in(r.output);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "size,threads,seconds,state_hash");
  std::map<std::string, std::string> hash_by_size;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 4u) << line;
    EXPECT_GT(std::stod(cells[2]), 0.0);
    auto [it, inserted] = hash_by_size.emplace(cells[0], cells[3]);
    if (!inserted) {
      EXPECT_EQ(it->second, cells[3]) << line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(hash_by_size.count("200"));
}

TEST(CliBench, TimeGrowsWithMapSize) {
  const auto r = run_cli("bench --sizes 100,400,1000 --steps 300 --warmup 0 --repeats 1");
  ASSERT_EQ(r.code, 0) << r.output;
  std::istringstream in(r.output);
  std::string line;
  std::getline(in, line);
  std::vector<double> seconds;
  while (std::getline(in, line)) seconds.push_back(std::stod(line.substr(line.find(',', line.find(',') + 1) + 1)));
  ASSERT_EQ(seconds.size(), 3u);
  EXPECT_LT(seconds[0], seconds[1]);
  EXPECT_LT(seconds[1], seconds[2]);
}
