#include "dfire/metrics.hpp"

#include <stdexcept>

namespace dfire {

double jaccard_index(const MaskGrid& reference, const MaskGrid& predicted) {
  if (reference.shape() != predicted.shape()) {
    throw std::invalid_argument("jaccard_index: shape " + shape_to_string(reference.shape()) +
                                " vs " + shape_to_string(predicted.shape()));
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const bool a = reference[i] != 0;
    const bool b = predicted[i] != 0;
    inter += a && b;
    uni += a || b;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::uint64_t manhattan_distance(std::span<const std::uint64_t> reference,
                                 std::span<const std::uint64_t> predicted) {
  if (reference.size() != predicted.size()) {
    throw std::invalid_argument("manhattan_distance: series lengths differ (" +
                                std::to_string(reference.size()) + " vs " +
                                std::to_string(predicted.size()) + ")");
  }
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < reference.size(); ++t) {
    total += reference[t] > predicted[t] ? reference[t] - predicted[t] : predicted[t] - reference[t];
  }
  return total;
}

}  // namespace dfire
