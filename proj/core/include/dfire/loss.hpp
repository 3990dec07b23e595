#pragma once

#include <cstddef>

#include "dfire/array.hpp"

namespace dfire {

inline constexpr std::size_t kPoolWindow = 4;

/// Half-open bounding box [row0, row1) x [col0, col1).
struct CropWindow {
  std::size_t row0 = 0;
  std::size_t row1 = 0;
  std::size_t col0 = 0;
  std::size_t col1 = 0;

  std::size_t cells() const noexcept { return (row1 - row0) * (col1 - col0); }
  friend bool operator==(const CropWindow&, const CropWindow&) = default;
};

struct LossBreakdown {
  double bce_term = 0.0;
  double mse_term = 0.0;
  double total = 0.0;
  CropWindow crop;
};

struct LossResult {
  LossBreakdown breakdown;
  RealGrid gradient;  // dL / d(prediction), same shape as the prediction
};

/// Binary cross-entropy with logits plus pooled mean-squared error.
///
/// The raw accumulator values are used as logits. The BCE term averages over
/// the bounding box of the union of non-zero predictions and targets (the
/// full grid when both are empty). The MSE term compares 4x4 average-pooled
/// maps (stride 4, trailing rows/columns dropped) averaged over pooled cells.
LossResult combined_loss(const RealGrid& prediction, const MaskGrid& target);

/// Bounding box of cells where prediction != 0 or target is set; the full
/// grid when there are none.
CropWindow union_crop(const RealGrid& prediction, const MaskGrid& target);

/// Average pooling with a square window and equal stride; remainder dropped.
RealGrid average_pool(const RealGrid& grid, std::size_t window = kPoolWindow);

}  // namespace dfire
