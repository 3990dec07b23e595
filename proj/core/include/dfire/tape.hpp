#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dfire/model.hpp"
#include "dfire/propagation.hpp"

namespace dfire {

/// One burning neighbor's contribution to a recorded ignition.
struct TapeEdge {
  std::uint8_t neighbor = 0;  // index into kNeighbors, seen from the ignited cell
  EdgeTerms terms;
  double raw = 0.0;         // p_propagate
  double normalized = 0.0;  // f_p(p_propagate)
};

struct TapeEntry {
  int step = 0;
  Cell cell;
  double p_ignite = 0.0;
  std::uint32_t first_edge = 0;
  std::uint32_t edge_count = 0;
};

/// Record of the ignitions whose probabilities stay differentiable. The
/// realized trajectory is a constant of the backward pass; only the
/// probabilities captured here carry gradient.
class GradientTape {
 public:
  GradientTape() = default;
  GradientTape(std::size_t rows, std::size_t cols, double normalization = kDefaultNormalization)
      : rows_(rows), cols_(cols), normalization_(normalization) {}

  void append(int step, Cell cell, double p_ignite, std::span<const TapeEdge> edges);
  /// Appends all entries of `segment`, preserving their order.
  void splice(const GradientTape& segment);
  void clear();

  std::span<const TapeEntry> entries() const noexcept { return entries_; }
  std::span<const TapeEdge> edges() const noexcept { return edges_; }
  std::span<const TapeEdge> edges_of(const TapeEntry& entry) const noexcept {
    return std::span<const TapeEdge>(edges_).subspan(entry.first_edge, entry.edge_count);
  }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double normalization() const noexcept { return normalization_; }
  void reshape(std::size_t rows, std::size_t cols, double normalization) {
    rows_ = rows;
    cols_ = cols;
    normalization_ = normalization;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double normalization_ = kDefaultNormalization;
  std::vector<TapeEntry> entries_;
  std::vector<TapeEdge> edges_;
};

/// Attachment decision for a step in 1..total_steps. Attaches the first
/// r_first steps, the last r_last steps, and r_between interior steps placed
/// at round(lo + (hi - lo) * (k + 0.5) / r_between) for k in [0, r_between),
/// where lo = r_first + 1 and hi = total_steps - r_last.
bool check_if_attach(int step, int total_steps, const StepRingsConfig& rings);

struct AttachmentPlan {
  int total_steps = 0;
  std::vector<int> attached_steps;  // sorted, unique

  bool attached(int step) const;
};

AttachmentPlan make_attachment_plan(int total_steps, const StepRingsConfig& rings);

/// Gradient of a scalar loss with respect to the four calibrated parameters.
struct ParamGradient {
  double c1 = 0.0;
  double c2 = 0.0;
  double a = 0.0;
  double p_h = 0.0;

  ParamGradient& operator+=(const ParamGradient& other) noexcept {
    c1 += other.c1;
    c2 += other.c2;
    a += other.a;
    p_h += other.p_h;
    return *this;
  }
  bool finite() const noexcept;
};

/// Reverse-mode chain rule through tanh normalization, the inclusion-exclusion
/// product and the factor product, weighted by dL/dy_hat at each ignited cell.
/// Sums over fixed-size chunks in entry order, so the result does not depend
/// on thread count.
ParamGradient backward_params(const GradientTape& tape, const RealGrid& loss_grad,
                              const ModelParams& params, int threads = 0);

/// Recomputes every entry's p_ignite from the cached edge terms.
std::vector<double> replay_ignitions(const GradientTape& tape, const ModelParams& params);

}  // namespace dfire
