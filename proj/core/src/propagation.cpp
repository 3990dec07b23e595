#include "dfire/propagation.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dfire/rng.hpp"
#include "dfire/tape.hpp"

namespace dfire {

namespace {

constexpr int opposite(int k) noexcept { return 7 - k; }

int resolve_threads(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

struct Window {
  int r0 = 0, r1 = -1, c0 = 0, c1 = -1;
  bool empty() const { return r1 < r0; }
};

// Bounding box of burning cells grown by one ring and clipped to the grid.
Window active_window(const MaskGrid& burning) {
  const int rows = static_cast<int>(burning.rows());
  const int cols = static_cast<int>(burning.cols());
  Window w{rows, -1, cols, -1};
  for (int r = 0; r < rows; ++r) {
    const auto* row = burning.data() + static_cast<std::size_t>(r) * cols;
    const auto* first = std::find(row, row + cols, std::uint8_t{1});
    if (first == row + cols) continue;
    const auto last = std::find(std::make_reverse_iterator(row + cols),
                                 std::make_reverse_iterator(row), std::uint8_t{1});
    w.r0 = std::min(w.r0, r);
    w.r1 = std::max(w.r1, r);
    w.c0 = std::min(w.c0, static_cast<int>(first - row));
    w.c1 = std::max(w.c1, static_cast<int>(last.base() - 1 - row));
  }
  if (w.r1 < 0) return Window{};
  return {std::max(0, w.r0 - 1), std::min(rows - 1, w.r1 + 1), std::max(0, w.c0 - 1),
          std::min(cols - 1, w.c1 + 1)};
}

}  // namespace

double degrees_to_radians(double deg) noexcept { return deg * (std::numbers::pi / 180.0); }

double wind_factor_from_cos(double c1, double c2, double wind_speed,
                            double cos_minus_one) noexcept {
  return std::exp(c1 * wind_speed) * std::exp(c2 * wind_speed * cos_minus_one);
}

double wind_factor(double c1, double c2, double wind_speed, double relative_angle_deg) noexcept {
  return wind_factor_from_cos(c1, c2, wind_speed,
                              std::cos(degrees_to_radians(relative_angle_deg)) - 1.0);
}

double slope_factor(double a, double slope_deg) noexcept { return std::exp(a * slope_deg); }

double normalize_prob(double x, double c) noexcept { return std::tanh(c * x); }

double ignition_prob(std::span<const double> neighbor_probs) noexcept {
  double keep = 1.0;
  for (double p : neighbor_probs) keep *= 1.0 - p;
  return 1.0 - keep;
}

EdgeTerms edge_terms(const Landscape& land, Cell source, int k, const KernelOptions& options) {
  const auto& off = kNeighbors[static_cast<std::size_t>(k)];
  const auto sr = static_cast<std::size_t>(source.row);
  const auto sc = static_cast<std::size_t>(source.col);
  EdgeTerms t;
  t.wind_speed = land.wind_speed(sr, sc);
  t.cos_minus_one = std::cos(degrees_to_radians(land.wind_direction(sr, sc) - off.bearing_deg)) - 1.0;
  const double slope = land.slope(sr, sc, static_cast<std::size_t>(off.dr + 1),
                                  static_cast<std::size_t>(off.dc + 1));
  t.slope_deg = options.slope_units == SlopeUnits::kRadians ? slope * (180.0 / std::numbers::pi)
                                                            : slope;
  std::size_t fr = sr, fc = sc;
  if (options.factor_site == FactorSite::kTarget) {
    fr = static_cast<std::size_t>(source.row + off.dr);
    fc = static_cast<std::size_t>(source.col + off.dc);
  }
  t.veg_factor = 1.0 + land.canopy(fr, fc);
  t.den_factor = 1.0 + land.density(fr, fc);
  return t;
}

double raw_propagation(const ModelParams& p, const EdgeTerms& t) noexcept {
  return p.p_h * t.veg_factor * t.den_factor *
         wind_factor_from_cos(p.c1, p.c2, t.wind_speed, t.cos_minus_one) *
         slope_factor(p.a, t.slope_deg);
}

int neighbor_index(Cell from, Cell to) noexcept {
  const int dr = to.row - from.row;
  const int dc = to.col - from.col;
  for (int k = 0; k < 8; ++k) {
    if (kNeighbors[static_cast<std::size_t>(k)].dr == dr &&
        kNeighbors[static_cast<std::size_t>(k)].dc == dc) {
      return k;
    }
  }
  return -1;
}

double propagate_prob(const ModelParams& params, const Landscape& land, Cell from, Cell to,
                      const KernelOptions& options) {
  const int k = neighbor_index(from, to);
  if (k < 0) throw std::invalid_argument("propagate_prob: cells are not Moore neighbors");
  const auto rows = static_cast<int>(land.rows());
  const auto cols = static_cast<int>(land.cols());
  if (from.row < 0 || from.col < 0 || to.row < 0 || to.col < 0 || from.row >= rows ||
      to.row >= rows || from.col >= cols || to.col >= cols) {
    throw std::out_of_range("propagate_prob: cell outside the grid");
  }
  return raw_propagation(params, edge_terms(land, from, k, options));
}

namespace {

// Gathers the normalized contributions of burning neighbors of `cell` in
// kNeighbors order. Returns the number of contributing edges.
int gather_edges(const MaskGrid& burning, const Landscape& land, const ModelParams& params,
                 Cell cell, const KernelOptions& options, std::array<TapeEdge, 8>& edges,
                 std::array<double, 8>& normalized) {
  const int rows = static_cast<int>(burning.rows());
  const int cols = static_cast<int>(burning.cols());
  int n = 0;
  for (int k = 0; k < 8; ++k) {
    const auto& off = kNeighbors[static_cast<std::size_t>(k)];
    const int nr = cell.row + off.dr;
    const int nc = cell.col + off.dc;
    if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
    if (!burning(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc))) continue;
    auto& e = edges[static_cast<std::size_t>(n)];
    e.neighbor = static_cast<std::uint8_t>(k);
    e.terms = edge_terms(land, Cell{nr, nc}, opposite(k), options);
    e.raw = raw_propagation(params, e.terms);
    e.normalized = normalize_prob(e.raw, options.normalization);
    normalized[static_cast<std::size_t>(n)] = e.normalized;
    ++n;
  }
  return n;
}

}  // namespace

double cell_ignition_prob(const FireState& state, const Landscape& land, const ModelParams& params,
                          Cell cell, const KernelOptions& options) {
  std::array<TapeEdge, 8> edges{};
  std::array<double, 8> normalized{};
  const int n = gather_edges(state.burning, land, params, cell, options, edges, normalized);
  return ignition_prob(std::span<const double>(normalized.data(), static_cast<std::size_t>(n)));
}

StepStats step_forward(FireState& state, const Landscape& land, const ModelParams& params,
                       std::uint64_t seed, GradientTape* tape, const KernelOptions& options) {
  const int step = state.step + 1;
  const Window w = active_window(state.burning);
  state.step = step;
  if (w.empty()) return {};

  const int cols = static_cast<int>(state.cols());
  const MaskGrid previous = state.burning;
  MaskGrid& next = state.burning;
  MaskGrid& burned = state.burned;
  RealGrid& acc = state.accumulator;

  std::vector<GradientTape> row_tapes;
  if (tape) {
    tape->reshape(state.rows(), state.cols(), options.normalization);
    row_tapes.resize(static_cast<std::size_t>(w.r1 - w.r0 + 1));
  }

  std::size_t ignited = 0;
  std::size_t burned_out = 0;
  const int threads = resolve_threads(options.threads);

#pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : ignited, burned_out)
  for (int r = w.r0; r <= w.r1; ++r) {
    std::array<TapeEdge, 8> edges{};
    std::array<double, 8> normalized{};
    for (int c = w.c0; c <= w.c1; ++c) {
      const auto idx = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                       static_cast<std::size_t>(c);
      if (burned[idx]) continue;
      DrawKey key{seed, static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(r),
                  static_cast<std::uint32_t>(c), Channel::kContinue};
      if (previous[idx]) {
        if (!(uniform_draw(key) < params.p_continue)) {
          next[idx] = 0;
          burned[idx] = 1;
          ++burned_out;
        }
        continue;
      }
      const int n = gather_edges(previous, land, params, Cell{r, c}, options, edges, normalized);
      if (n == 0) continue;
      const double p_ignite =
          ignition_prob(std::span<const double>(normalized.data(), static_cast<std::size_t>(n)));
      key.channel = Channel::kIgnite;
      if (uniform_draw(key) < p_ignite) {
        next[idx] = 1;
        acc[idx] = p_ignite;
        ++ignited;
        if (tape) {
          row_tapes[static_cast<std::size_t>(r - w.r0)].append(
              step, Cell{r, c}, p_ignite,
              std::span<const TapeEdge>(edges.data(), static_cast<std::size_t>(n)));
        }
      }
    }
  }

  if (tape) {
    for (const auto& segment : row_tapes) tape->splice(segment);
  }
  return {ignited, burned_out};
}

void inject_ignitions(FireState& state, std::span<const Cell> cells) {
  const auto rows = static_cast<int>(state.rows());
  const auto cols = static_cast<int>(state.cols());
  for (const Cell& cell : cells) {
    if (cell.row < 0 || cell.col < 0 || cell.row >= rows || cell.col >= cols) {
      throw std::out_of_range("inject_ignitions: cell (" + std::to_string(cell.row) + "," +
                              std::to_string(cell.col) + ") outside the grid");
    }
  }
  for (const Cell& cell : cells) {
    const auto r = static_cast<std::size_t>(cell.row);
    const auto c = static_cast<std::size_t>(cell.col);
    if (state.burned(r, c) || state.burning(r, c)) continue;
    state.burning(r, c) = 1;
    state.accumulator(r, c) = kSeedAccumulator;
  }
}

SimulationResult run_simulation(const Landscape& land, const ModelParams& params,
                                const MaskGrid& init, const SimulationRequest& request) {
  if (request.steps < 0) throw std::invalid_argument("run_simulation: steps must be >= 0");
  std::vector<const WindUpdate*> schedule;
  for (const auto& update : request.wind_schedule) {
    if (update.step < 1 || update.step > request.steps) {
      throw std::out_of_range("run_simulation: wind update at step " +
                              std::to_string(update.step) + " outside [1, " +
                              std::to_string(request.steps) + "]");
    }
    const Shape expected{land.rows(), land.cols()};
    if (update.speed.shape() != expected || update.direction.shape() != expected) {
      throw std::invalid_argument("run_simulation: wind update shape mismatch");
    }
    schedule.push_back(&update);
  }
  std::stable_sort(schedule.begin(), schedule.end(),
                   [](const WindUpdate* x, const WindUpdate* y) { return x->step < y->step; });

  Landscape scheduled;
  const Landscape* active = &land;
  if (!schedule.empty()) {
    scheduled = land;
    active = &scheduled;
  }

  SimulationResult result;
  result.final_state = new_fire_state(init, land);
  FireState& state = result.final_state;
  result.series.reserve(static_cast<std::size_t>(request.steps));
  if (request.snapshot_every > 0) result.snapshots.push_back(state);

  std::size_t next_update = 0;
  for (int s = 1; s <= request.steps; ++s) {
    while (next_update < schedule.size() && schedule[next_update]->step == s) {
      scheduled.wind_speed = schedule[next_update]->speed;
      scheduled.wind_direction = schedule[next_update]->direction;
      ++next_update;
    }
    step_forward(state, *active, params, request.seed, nullptr, request.options);
    const std::size_t burning = state.burning_count();
    const std::size_t burned = state.burned_count();
    result.series.push_back({s, burning, burned, burning + burned});
    if (request.snapshot_every > 0 && s % request.snapshot_every == 0) {
      result.snapshots.push_back(state);
    }
  }
  return result;
}

std::uint64_t state_digest(const FireState& state) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  auto feed = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 0x100000001B3ull;
  };
  for (auto v : state.burning.values()) feed(v);
  for (auto v : state.burned.values()) feed(v);
  for (double v : state.accumulator.values()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) feed((bits >> (8 * i)) & 0xFF);
  }
  feed(static_cast<std::uint64_t>(state.step));
  return h;
}

}  // namespace dfire
