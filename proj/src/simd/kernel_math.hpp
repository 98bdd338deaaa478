#pragma once

namespace mkv::simd::detail {

// Kernel tails beyond this |u| are below 1e-25 and skipped.
inline constexpr double kde_cutoff = 12.0;
// 1 / (8 sqrt(2 pi))
inline constexpr double kde_scale = 0.049867785050179084;

}  // namespace mkv::simd::detail
