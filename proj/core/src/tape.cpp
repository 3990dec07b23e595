#include "dfire/tape.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace dfire {

void GradientTape::append(int step, Cell cell, double p_ignite, std::span<const TapeEdge> edges) {
  TapeEntry entry;
  entry.step = step;
  entry.cell = cell;
  entry.p_ignite = p_ignite;
  entry.first_edge = static_cast<std::uint32_t>(edges_.size());
  entry.edge_count = static_cast<std::uint32_t>(edges.size());
  edges_.insert(edges_.end(), edges.begin(), edges.end());
  entries_.push_back(entry);
}

void GradientTape::splice(const GradientTape& segment) {
  const auto offset = static_cast<std::uint32_t>(edges_.size());
  edges_.insert(edges_.end(), segment.edges_.begin(), segment.edges_.end());
  for (TapeEntry entry : segment.entries_) {
    entry.first_edge += offset;
    entries_.push_back(entry);
  }
}

void GradientTape::clear() {
  entries_.clear();
  edges_.clear();
}

bool check_if_attach(int step, int total_steps, const StepRingsConfig& rings) {
  if (step < 1 || step > total_steps) return false;
  const int first = std::max(rings.r_first, 0);
  const int last = std::max(rings.r_last, 0);
  const int between = std::max(rings.r_between, 0);
  if (step <= first || step > total_steps - last) return true;
  const int lo = first + 1;
  const int hi = total_steps - last;
  if (between == 0 || hi < lo) return false;
  for (int k = 0; k < between; ++k) {
    const double pos = lo + (hi - lo) * (k + 0.5) / between;
    if (std::lround(pos) == step) return true;
  }
  return false;
}

bool AttachmentPlan::attached(int step) const {
  return std::binary_search(attached_steps.begin(), attached_steps.end(), step);
}

AttachmentPlan make_attachment_plan(int total_steps, const StepRingsConfig& rings) {
  AttachmentPlan plan;
  plan.total_steps = total_steps;
  for (int s = 1; s <= total_steps; ++s) {
    if (check_if_attach(s, total_steps, rings)) plan.attached_steps.push_back(s);
  }
  return plan;
}

bool ParamGradient::finite() const noexcept {
  return std::isfinite(c1) && std::isfinite(c2) && std::isfinite(a) && std::isfinite(p_h);
}

namespace {

constexpr std::size_t kChunk = 512;

ParamGradient backward_entry(const GradientTape& tape, const TapeEntry& entry, double weight,
                             const ModelParams& params) {
  ParamGradient g;
  const auto edges = tape.edges_of(entry);
  const std::size_t n = edges.size();
  // prefix[i] = prod_{k<i} (1 - f_k); suffix handled on the fly from the right.
  std::array<double, 9> prefix{};
  prefix[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * (1.0 - edges[i].normalized);
  double suffix = 1.0;
  const double c = tape.normalization();
  for (std::size_t i = n; i-- > 0;) {
    const TapeEdge& e = edges[i];
    const double others = prefix[i] * suffix;
    suffix *= 1.0 - e.normalized;
    const double upstream = weight * others * c * (1.0 - e.normalized * e.normalized);
    const double without_base = e.terms.veg_factor * e.terms.den_factor *
                                wind_factor_from_cos(params.c1, params.c2, e.terms.wind_speed,
                                                     e.terms.cos_minus_one) *
                                slope_factor(params.a, e.terms.slope_deg);
    g.p_h += upstream * without_base;
    g.c1 += upstream * e.raw * e.terms.wind_speed;
    g.c2 += upstream * e.raw * e.terms.wind_speed * e.terms.cos_minus_one;
    g.a += upstream * e.raw * e.terms.slope_deg;
  }
  return g;
}

}  // namespace

ParamGradient backward_params(const GradientTape& tape, const RealGrid& loss_grad,
                              const ModelParams& params, int threads) {
  if (tape.empty()) return {};
  if (loss_grad.shape() != Shape{tape.rows(), tape.cols()}) {
    throw std::invalid_argument("backward_params: loss gradient shape " +
                                shape_to_string(loss_grad.shape()) + " does not match tape " +
                                shape_to_string(Shape{tape.rows(), tape.cols()}));
  }
  const auto entries = tape.entries();
  const std::size_t chunks = (entries.size() + kChunk - 1) / kChunk;
  std::vector<ParamGradient> partial(chunks);
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(n_threads)
  for (std::size_t chunk = 0; chunk < chunks; ++chunk) {
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(entries.size(), begin + kChunk);
    ParamGradient local;
    for (std::size_t i = begin; i < end; ++i) {
      const TapeEntry& entry = entries[i];
      const double weight = loss_grad(static_cast<std::size_t>(entry.cell.row),
                                      static_cast<std::size_t>(entry.cell.col));
      if (weight == 0.0) continue;
      local += backward_entry(tape, entry, weight, params);
    }
    partial[chunk] = local;
  }

  ParamGradient total;
  for (const auto& g : partial) total += g;
  return total;
}

std::vector<double> replay_ignitions(const GradientTape& tape, const ModelParams& params) {
  std::vector<double> out;
  out.reserve(tape.size());
  std::array<double, 8> normalized{};
  for (const TapeEntry& entry : tape.entries()) {
    const auto edges = tape.edges_of(entry);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      normalized[i] = normalize_prob(raw_propagation(params, edges[i].terms), tape.normalization());
    }
    out.push_back(ignition_prob(std::span<const double>(normalized.data(), edges.size())));
  }
  return out;
}

}  // namespace dfire
