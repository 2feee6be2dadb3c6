#pragma once

#include <cmath>
#include <span>

namespace relaycap {

inline constexpr double kLog2E = 1.4426950408889634;  // log2(e)

// log2(1 + x) without forming 1 + x first; keeps full precision for small x.
inline double log2_1p(double x) { return std::log1p(x) * kLog2E; }

// Deterministic pairwise summation; rounding error grows O(log n).
double pairwise_sum(std::span<const double> values);

double pairwise_mean(std::span<const double> values);

}  // namespace relaycap
