#include "dfire/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfire {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -[y log s(x) + (1 - y) log(1 - s(x))] without overflow.
double bce_with_logits(double x, double y) {
  return std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

CropWindow union_crop(const RealGrid& prediction, const MaskGrid& target) {
  const std::size_t rows = prediction.rows();
  const std::size_t cols = prediction.cols();
  std::size_t r0 = rows, r1 = 0, c0 = cols, c1 = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (prediction(r, c) != 0.0 || target(r, c) != 0) {
        r0 = std::min(r0, r);
        r1 = std::max(r1, r + 1);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c + 1);
      }
    }
  }
  if (r1 == 0) return {0, rows, 0, cols};
  return {r0, r1, c0, c1};
}

RealGrid average_pool(const RealGrid& grid, std::size_t window) {
  const std::size_t out_rows = grid.rows() / window;
  const std::size_t out_cols = grid.cols() / window;
  RealGrid out = RealGrid::grid(out_rows, out_cols);
  const double scale = 1.0 / static_cast<double>(window * window);
  for (std::size_t pr = 0; pr < out_rows; ++pr) {
    for (std::size_t pc = 0; pc < out_cols; ++pc) {
      double sum = 0.0;
      for (std::size_t r = pr * window; r < (pr + 1) * window; ++r) {
        for (std::size_t c = pc * window; c < (pc + 1) * window; ++c) sum += grid(r, c);
      }
      out(pr, pc) = sum * scale;
    }
  }
  return out;
}

LossResult combined_loss(const RealGrid& prediction, const MaskGrid& target) {
  if (prediction.rank() != 2 || prediction.shape() != target.shape()) {
    throw std::invalid_argument("combined_loss: prediction " + shape_to_string(prediction.shape()) +
                                " and target " + shape_to_string(target.shape()) +
                                " must be matching H x W grids");
  }
  LossResult result;
  result.gradient = RealGrid(prediction.shape());
  LossBreakdown& out = result.breakdown;

  out.crop = union_crop(prediction, target);
  const double bce_scale = 1.0 / static_cast<double>(out.crop.cells());
  double bce = 0.0;
  for (std::size_t r = out.crop.row0; r < out.crop.row1; ++r) {
    for (std::size_t c = out.crop.col0; c < out.crop.col1; ++c) {
      const double x = prediction(r, c);
      const double y = target(r, c) ? 1.0 : 0.0;
      bce += bce_with_logits(x, y);
      result.gradient(r, c) = (sigmoid(x) - y) * bce_scale;
    }
  }
  out.bce_term = bce * bce_scale;

  const std::size_t pooled_rows = prediction.rows() / kPoolWindow;
  const std::size_t pooled_cols = prediction.cols() / kPoolWindow;
  const std::size_t pooled_cells = pooled_rows * pooled_cols;
  if (pooled_cells > 0) {
    RealGrid target_real(target.shape());
    for (std::size_t i = 0; i < target.size(); ++i) target_real[i] = target[i] ? 1.0 : 0.0;
    const RealGrid pooled_pred = average_pool(prediction);
    const RealGrid pooled_target = average_pool(target_real);
    const double mse_scale = 1.0 / static_cast<double>(pooled_cells);
    const double window_scale = 1.0 / static_cast<double>(kPoolWindow * kPoolWindow);
    double mse = 0.0;
    for (std::size_t pr = 0; pr < pooled_rows; ++pr) {
      for (std::size_t pc = 0; pc < pooled_cols; ++pc) {
        const double diff = pooled_pred(pr, pc) - pooled_target(pr, pc);
        mse += diff * diff;
        const double d_cell = 2.0 * diff * mse_scale * window_scale;
        if (d_cell == 0.0) continue;
        for (std::size_t r = pr * kPoolWindow; r < (pr + 1) * kPoolWindow; ++r) {
          for (std::size_t c = pc * kPoolWindow; c < (pc + 1) * kPoolWindow; ++c) {
            result.gradient(r, c) += d_cell;
          }
        }
      }
    }
    out.mse_term = mse * mse_scale;
  }

  out.total = out.bce_term + out.mse_term;
  return result;
}

}  // namespace dfire
