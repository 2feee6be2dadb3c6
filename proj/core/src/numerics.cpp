#include "relaycap/numerics.hpp"

namespace relaycap {
namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += v[i];
    }
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

double pairwise_mean(std::span<const double> values) {
  if (values.empty()) {
    return 0.0;
  }
  return pairwise_sum(values) / static_cast<double>(values.size());
}

}  // namespace relaycap
