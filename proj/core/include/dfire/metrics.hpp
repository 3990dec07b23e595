#pragma once

#include <cstdint>
#include <span>

#include "dfire/array.hpp"

namespace dfire {

/// |A n B| / |A u B|; 1 when both masks are empty.
double jaccard_index(const MaskGrid& reference, const MaskGrid& predicted);

/// Sum over steps of |A_t - B_t| for per-step affected-cell counts.
std::uint64_t manhattan_distance(std::span<const std::uint64_t> reference,
                                 std::span<const std::uint64_t> predicted);

}  // namespace dfire
