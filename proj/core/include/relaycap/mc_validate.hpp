#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relaycap/channel.hpp"
#include "relaycap/relaying.hpp"

namespace relaycap {

// Dense symmetric covariance matrix. n_samples == 0 marks covariances
// assembled analytically rather than estimated from draws.
struct EmpiricalCov {
  std::size_t dim{0};
  std::vector<double> matrix;  // row-major dim x dim
  std::size_t n_samples{0};

  [[nodiscard]] double at(std::size_t i, std::size_t j) const {
    return matrix[i * dim + j];
  }
};

// Index layout of the joint Gaussian vector used throughout this module.
enum JointIndex : std::size_t { kX = 0, kXr = 1, kY = 2, kYr = 3, kYrHat = 4 };
inline constexpr std::size_t kJointDim = 5;

// Draws n samples of (x, x_r, y, y_r, y_r + e) with independent unit-power
// inputs, correlated noises from the channel sampler and e ~ N(0, q), and
// returns the sample covariance. Deterministic for a fixed seed.
EmpiricalCov simulate_joint(const ChannelParams& p, const QuantizerChoice& q,
                            std::size_t n, std::uint64_t seed);

// The same covariance assembled from the closed-form second moments.
EmpiricalCov analytic_joint_cov(const ChannelParams& p, const QuantizerChoice& q);

// Fully correlated inputs (x_r == x): the pair (x, y) whose mutual
// information is the relaxed MAC-cut bound.
EmpiricalCov simulate_coherent_pair(const ChannelParams& p, std::size_t n,
                                    std::uint64_t seed);
EmpiricalCov analytic_coherent_cov(const ChannelParams& p);

// Conditional mutual information I(A; B | C) from covariance determinants,
//   1/2 log2(det S_{AC} det S_{BC} / (det S_C det S_{ABC})),
// exact for jointly Gaussian vectors. The index sets must be disjoint.
// Determinants use Cholesky factorizations; a rank-deficient minor is retried
// with 1e-12 added to the diagonal before the call fails.
RateBits gaussian_mi_from_cov(const EmpiricalCov& cov,
                              std::span<const std::size_t> set_a,
                              std::span<const std::size_t> set_b,
                              std::span<const std::size_t> set_cond = {});

struct ConditionalVarianceCheck {
  double analytic{0.0};
  double empirical{0.0};
};

// Residual variance of h_sr*x + z_r given h_sd*x + z: the analytic value
//   (1 - rho_z^2 + h_sr^2 + h_sd^2 - 2 rho_z h_sr h_sd) / (1 + h_sd^2)
// against the empirical residual of the best linear predictor on n draws.
ConditionalVarianceCheck conditional_variance_check(const ChannelParams& p,
                                                    std::size_t n,
                                                    std::uint64_t seed);

}  // namespace relaycap
