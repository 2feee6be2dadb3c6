#include "relaycap/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaycap {

bool RateBits::is_finite() const { return std::isfinite(bits); }

void validate(const ChannelParams& p) {
  if (!std::isfinite(p.h_sd) || !std::isfinite(p.h_sr) || !std::isfinite(p.h_rd) ||
      !std::isfinite(p.rho_z)) {
    throw std::domain_error("channel params must be finite");
  }
  if (p.h_sd < 0.0 || p.h_sr < 0.0 || p.h_rd < 0.0) {
    throw std::domain_error("channel gains are amplitudes and must be nonnegative");
  }
  if (p.rho_z < -1.0 || p.rho_z > 1.0) {
    throw std::domain_error("noise correlation rho_z must lie in [-1, 1], got " +
                            std::to_string(p.rho_z));
  }
}

double gain_from_db(double db_power) { return std::pow(10.0, db_power / 20.0); }

double gain_to_db(double h) { return 20.0 * std::log10(h); }

ChannelParams params_from_db(double h_sd_db, double h_sr_db, double h_rd_db,
                             double rho_z) {
  if (!std::isfinite(h_sd_db) || !std::isfinite(h_sr_db) || !std::isfinite(h_rd_db)) {
    throw std::domain_error("gain dB values must be finite");
  }
  ChannelParams p{gain_from_db(h_sd_db), gain_from_db(h_sr_db),
                  gain_from_db(h_rd_db), rho_z};
  validate(p);
  return p;
}

CorrelatedNoiseSampler::CorrelatedNoiseSampler(double rho_z, std::uint64_t seed)
    : rng_(seed), normal_(0.0, 1.0), rho_z_(rho_z),
      tail_(std::sqrt((1.0 - rho_z) * (1.0 + rho_z))) {
  if (!std::isfinite(rho_z) || rho_z < -1.0 || rho_z > 1.0) {
    throw std::domain_error("rho_z must lie in [-1, 1]");
  }
}

NoiseSample CorrelatedNoiseSampler::operator()() {
  const double u1 = normal_(rng_);
  const double u2 = normal_(rng_);
  return {u1, rho_z_ * u1 + tail_ * u2};
}

std::vector<NoiseSample> sample_noise_pair(double rho_z, std::size_t count,
                                           std::uint64_t seed) {
  if (count == 0) {
    throw std::invalid_argument("sample count must be positive");
  }
  CorrelatedNoiseSampler sampler(rho_z, seed);
  std::vector<NoiseSample> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    samples.push_back(sampler());
  }
  return samples;
}

}  // namespace relaycap
