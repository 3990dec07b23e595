#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dfire {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_volume(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::string shape_to_string(const Shape& shape);

/// Dense row-major array with a runtime shape (last axis fastest).
///
/// Landscapes use rank 2 (H x W) and rank 4 (H x W x 3 x 3). The grid file
/// format stores arrays of rank 1 to 4.
template <typename T>
class Array {
 public:
  Array() = default;

  explicit Array(Shape shape, T fill = T{})
      : shape_(std::move(shape)), data_(shape_volume(shape_), fill) {}

  Array(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_volume(shape_)) {
      throw std::invalid_argument("array data length does not match shape " +
                                  shape_to_string(shape_));
    }
  }

  static Array grid(std::size_t rows, std::size_t cols, T fill = T{}) {
    return Array(Shape{rows, cols}, fill);
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t rows() const { return shape_.at(0); }
  std::size_t cols() const { return shape_.at(1); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * shape_[1] + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * shape_[1] + c];
  }

  // Rank-4 access used by the per-neighbor slope field.
  T& operator()(std::size_t r, std::size_t c, std::size_t i, std::size_t j) noexcept {
    return data_[((r * shape_[1] + c) * shape_[2] + i) * shape_[3] + j];
  }
  const T& operator()(std::size_t r, std::size_t c, std::size_t i, std::size_t j) const noexcept {
    return data_[((r * shape_[1] + c) * shape_[2] + i) * shape_[3] + j];
  }

  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Array&, const Array&) = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

using RealGrid = Array<double>;
using MaskGrid = Array<std::uint8_t>;

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

inline std::size_t count_true(const MaskGrid& mask) {
  std::size_t n = 0;
  for (auto v : mask.values()) n += v != 0;
  return n;
}

}  // namespace dfire
