#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <vector>

namespace relaycap {

// Rate in bits per channel use. +infinity is reserved for bounds that
// genuinely diverge. Usable rates are nonnegative; the raw per-cut
// mutual-information differences that feed them may dip below zero and are
// carried as plain doubles where that matters.
struct RateBits {
  double bits{0.0};

  [[nodiscard]] bool is_finite() const;
  friend constexpr auto operator<=>(const RateBits&, const RateBits&) = default;
};

inline RateBits min(RateBits a, RateBits b) { return a.bits < b.bits ? a : b; }

// Three-node Gaussian relay channel with correlated relay/destination noises:
//   y_r = h_sr * x + z_r
//   y   = h_sd * x + h_rd * x_r + z,   E[z_r z] = rho_z.
// Transmit powers and noise variances are normalized to one, so the gains are
// the only free magnitudes. Gains are nonnegative amplitudes.
struct ChannelParams {
  double h_sd{0.0};
  double h_sr{0.0};
  double h_rd{0.0};
  double rho_z{0.0};
};

// Throws std::domain_error unless all fields are finite, the gains are
// nonnegative and |rho_z| <= 1.
void validate(const ChannelParams& p);

// dB values quantify the squared gains (h^2 expressed in power dB), matching
// the usual link-budget convention.
double gain_from_db(double db_power);
double gain_to_db(double h);

ChannelParams params_from_db(double h_sd_db, double h_sr_db, double h_rd_db,
                             double rho_z);

struct NoiseSample {
  double z_r{0.0};
  double z{0.0};
};

// Streaming generator of unit-variance noise pairs with correlation rho_z,
// built as z_r = u1, z = rho_z*u1 + sqrt(1-rho_z^2)*u2 from independent
// standard normals. A fixed seed gives a bitwise-stable stream for a given
// build of the library.
class CorrelatedNoiseSampler {
 public:
  CorrelatedNoiseSampler(double rho_z, std::uint64_t seed);

  NoiseSample operator()();

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  double rho_z_;
  double tail_;
};

std::vector<NoiseSample> sample_noise_pair(double rho_z, std::size_t count,
                                           std::uint64_t seed);

}  // namespace relaycap
