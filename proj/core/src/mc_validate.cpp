#include "relaycap/mc_validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "relaycap/numerics.hpp"

namespace relaycap {
namespace {

// Log-determinant of a symmetric positive-definite matrix via Cholesky.
// Returns false when a pivot is not positive.
bool cholesky_logdet(const std::vector<double>& a, std::size_t n, double* out) {
  std::vector<double> l(n * n, 0.0);
  double logdet = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) {
      diag -= l[j * n + k] * l[j * n + k];
    }
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      return false;
    }
    const double root = std::sqrt(diag);
    l[j * n + j] = root;
    logdet += 2.0 * std::log(root);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) {
        v -= l[i * n + k] * l[j * n + k];
      }
      l[i * n + j] = v / root;
    }
  }
  *out = logdet;
  return true;
}

// Log-determinant of the principal submatrix indexed by idx. An empty set has
// determinant 1. Rank-deficient minors are retried with 1e-12 on the diagonal.
double logdet_minor(const EmpiricalCov& cov, const std::vector<std::size_t>& idx) {
  const std::size_t n = idx.size();
  if (n == 0) {
    return 0.0;
  }
  std::vector<double> sub(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sub[i * n + j] = cov.at(idx[i], idx[j]);
    }
  }
  double logdet = 0.0;
  if (cholesky_logdet(sub, n, &logdet)) {
    return logdet;
  }
  for (std::size_t i = 0; i < n; ++i) {
    sub[i * n + i] += 1e-12;
  }
  if (cholesky_logdet(sub, n, &logdet)) {
    return logdet;
  }
  throw std::domain_error("covariance minor is singular even after regularization");
}

std::vector<std::size_t> concat_sorted(std::span<const std::size_t> a,
                                       std::span<const std::size_t> b,
                                       std::span<const std::size_t> c = {}) {
  std::vector<std::size_t> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

void check_disjoint_in_range(const EmpiricalCov& cov,
                             std::span<const std::size_t> a,
                             std::span<const std::size_t> b,
                             std::span<const std::size_t> c) {
  auto all = concat_sorted(a, b, c);
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("index sets must be disjoint");
  }
  if (!all.empty() && all.back() >= cov.dim) {
    throw std::invalid_argument("index out of range for covariance");
  }
}

class JointSimulator {
 public:
  JointSimulator(const ChannelParams& p, double q, std::uint64_t seed)
      : p_(p), noise_(p.rho_z, seed), input_rng_(seed ^ 0x9e3779b97f4a7c15ull),
        normal_(0.0, 1.0), q_root_(std::sqrt(q)) {}

  // One draw of (x, x_r, y, y_r, y_r + e).
  std::array<double, kJointDim> operator()() {
    const double x = normal_(input_rng_);
    const double x_r = normal_(input_rng_);
    const NoiseSample z = noise_();
    const double e = q_root_ * normal_(input_rng_);
    const double y_r = p_.h_sr * x + z.z_r;
    const double y = p_.h_sd * x + p_.h_rd * x_r + z.z;
    return {x, x_r, y, y_r, y_r + e};
  }

 private:
  ChannelParams p_;
  CorrelatedNoiseSampler noise_;
  std::mt19937_64 input_rng_;
  std::normal_distribution<double> normal_;
  double q_root_;
};

template <std::size_t Dim, typename Draw>
EmpiricalCov accumulate_cov(std::size_t n, Draw&& draw) {
  std::array<double, Dim> sum{};
  std::array<double, Dim * Dim> prod{};
  for (std::size_t s = 0; s < n; ++s) {
    const auto v = draw();
    for (std::size_t i = 0; i < Dim; ++i) {
      sum[i] += v[i];
      for (std::size_t j = i; j < Dim; ++j) {
        prod[i * Dim + j] += v[i] * v[j];
      }
    }
  }
  EmpiricalCov cov;
  cov.dim = Dim;
  cov.n_samples = n;
  cov.matrix.resize(Dim * Dim);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < Dim; ++i) {
    for (std::size_t j = i; j < Dim; ++j) {
      const double c = (prod[i * Dim + j] - sum[i] * sum[j] / nd) / (nd - 1.0);
      cov.matrix[i * Dim + j] = c;
      cov.matrix[j * Dim + i] = c;
    }
  }
  return cov;
}

}  // namespace

EmpiricalCov simulate_joint(const ChannelParams& p, const QuantizerChoice& q,
                            std::size_t n, std::uint64_t seed) {
  validate(p);
  if (n < 10000) {
    throw std::invalid_argument("simulate_joint needs at least 1e4 samples");
  }
  if (!(q.q >= 0.0) || !std::isfinite(q.q)) {
    throw std::domain_error("quantization variance must be finite and nonnegative");
  }
  JointSimulator sim(p, q.q, seed);
  return accumulate_cov<kJointDim>(n, sim);
}

EmpiricalCov analytic_joint_cov(const ChannelParams& p, const QuantizerChoice& q) {
  validate(p);
  if (!(q.q >= 0.0) || !std::isfinite(q.q)) {
    throw std::domain_error("quantization variance must be finite and nonnegative");
  }
  EmpiricalCov cov;
  cov.dim = kJointDim;
  cov.n_samples = 0;
  cov.matrix.assign(kJointDim * kJointDim, 0.0);
  const auto set = [&cov](std::size_t i, std::size_t j, double v) {
    cov.matrix[i * kJointDim + j] = v;
    cov.matrix[j * kJointDim + i] = v;
  };
  set(kX, kX, 1.0);
  set(kXr, kXr, 1.0);
  set(kX, kY, p.h_sd);
  set(kXr, kY, p.h_rd);
  set(kX, kYr, p.h_sr);
  set(kY, kY, 1.0 + p.h_sd * p.h_sd + p.h_rd * p.h_rd);
  set(kY, kYr, p.h_sd * p.h_sr + p.rho_z);
  set(kYr, kYr, 1.0 + p.h_sr * p.h_sr);
  set(kX, kYrHat, p.h_sr);
  set(kY, kYrHat, p.h_sd * p.h_sr + p.rho_z);
  set(kYr, kYrHat, 1.0 + p.h_sr * p.h_sr);
  set(kYrHat, kYrHat, 1.0 + p.h_sr * p.h_sr + q.q);
  return cov;
}

EmpiricalCov simulate_coherent_pair(const ChannelParams& p, std::size_t n,
                                    std::uint64_t seed) {
  validate(p);
  if (n < 2) {
    throw std::invalid_argument("need at least two samples for a covariance");
  }
  const double gain = p.h_sd + p.h_rd;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  return accumulate_cov<2>(n, [&]() {
    const double x = normal(rng);
    const double z = normal(rng);
    return std::array<double, 2>{x, gain * x + z};
  });
}

EmpiricalCov analytic_coherent_cov(const ChannelParams& p) {
  validate(p);
  const double gain = p.h_sd + p.h_rd;
  EmpiricalCov cov;
  cov.dim = 2;
  cov.n_samples = 0;
  cov.matrix = {1.0, gain, gain, 1.0 + gain * gain};
  return cov;
}

RateBits gaussian_mi_from_cov(const EmpiricalCov& cov,
                              std::span<const std::size_t> set_a,
                              std::span<const std::size_t> set_b,
                              std::span<const std::size_t> set_cond) {
  check_disjoint_in_range(cov, set_a, set_b, set_cond);
  const double ld_ac = logdet_minor(cov, concat_sorted(set_a, set_cond));
  const double ld_bc = logdet_minor(cov, concat_sorted(set_b, set_cond));
  const double ld_c = logdet_minor(cov, concat_sorted(set_cond, {}));
  const double ld_abc = logdet_minor(cov, concat_sorted(set_a, set_b, set_cond));
  return RateBits{0.5 * kLog2E * (ld_ac + ld_bc - ld_c - ld_abc)};
}

ConditionalVarianceCheck conditional_variance_check(const ChannelParams& p,
                                                    std::size_t n,
                                                    std::uint64_t seed) {
  validate(p);
  if (n < 100000) {
    throw std::invalid_argument("conditional_variance_check needs at least 1e5 samples");
  }
  const double hsd2 = p.h_sd * p.h_sd;
  const double hsr2 = p.h_sr * p.h_sr;
  const double analytic = ((1.0 - p.rho_z) * (1.0 + p.rho_z) + hsr2 + hsd2 -
                           2.0 * p.rho_z * p.h_sr * p.h_sd) /
                          (1.0 + hsd2);

  // Residual variance of u = h_sr x + z_r after the best linear predictor
  // from v = h_sd x + z.
  CorrelatedNoiseSampler noise(p.rho_z, seed);
  std::mt19937_64 rng(seed ^ 0xd1342543de82ef95ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  double suu = 0.0, svv = 0.0, suv = 0.0, su = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = normal(rng);
    const NoiseSample z = noise();
    const double u = p.h_sr * x + z.z_r;
    const double v = p.h_sd * x + z.z;
    su += u;
    sv += v;
    suu += u * u;
    svv += v * v;
    suv += u * v;
  }
  const double nd = static_cast<double>(n);
  const double var_u = (suu - su * su / nd) / (nd - 1.0);
  const double var_v = (svv - sv * sv / nd) / (nd - 1.0);
  const double cov_uv = (suv - su * sv / nd) / (nd - 1.0);
  const double empirical = var_u - cov_uv * cov_uv / var_v;
  return {analytic, empirical};
}

}  // namespace relaycap
