#include "relaycap/af_isi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relaycap/cutset.hpp"
#include "relaycap/numerics.hpp"

namespace relaycap {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_grid_size(std::size_t n_points) {
  if (n_points < 64 || n_points % 2 != 0) {
    throw std::invalid_argument("spectrum grid needs an even point count >= 64");
  }
}

}  // namespace

double SpectrumGrid::omega(std::size_t k) const {
  return kTwoPi * (static_cast<double>(k) + offset) / static_cast<double>(n_points);
}

double max_relay_scaling(const ChannelParams& p) {
  validate(p);
  return 1.0 / std::sqrt(1.0 + p.h_sr * p.h_sr);
}

IsiChannel build_isi(const ChannelParams& p) {
  return build_isi(p, max_relay_scaling(p));
}

IsiChannel build_isi(const ChannelParams& p, double alpha) {
  validate(p);
  const double bound = 1.0 / std::sqrt(1.0 + p.h_sr * p.h_sr);
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > bound) {
    throw std::domain_error("relay scaling alpha must lie in [0, 1/sqrt(1 + h_sr^2)]");
  }
  IsiChannel ch;
  ch.alpha = alpha;
  const double relay_path = alpha * p.h_rd;
  ch.a_sig = p.h_sd * p.h_sd + relay_path * relay_path * p.h_sr * p.h_sr;
  ch.b_sig = 2.0 * relay_path * p.h_sr * p.h_sd;
  ch.a_noise = 1.0 + relay_path * relay_path;
  ch.b_noise = 2.0 * p.rho_z * relay_path;
  return ch;
}

double signal_spectrum(const IsiChannel& ch, double omega) {
  return ch.a_sig + ch.b_sig * std::cos(omega);
}

double noise_spectrum(const IsiChannel& ch, double omega) {
  return ch.a_noise + ch.b_noise * std::cos(omega);
}

WaterFillingSolution waterfill(const IsiChannel& ch, std::size_t n_points,
                               double tol, double power_budget) {
  check_grid_size(n_points);
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (!(power_budget > 0.0) || !std::isfinite(power_budget)) {
    throw std::invalid_argument("power budget must be positive and finite");
  }

  // The noise spectrum can only vanish at w = 0 or pi (|rho_z| = 1 with
  // alpha*h_rd = 1); the half-offset grid keeps those off the nodes.
  const double offset =
      ch.a_noise - std::abs(ch.b_noise) < 1e-12 * ch.a_noise ? 0.5 : 0.0;

  const std::size_t n = n_points;
  SpectrumGrid grid{n, offset, {}};
  std::vector<double> sig(n), noise(n), ratio(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = grid.omega(k);
    sig[k] = signal_spectrum(ch, w);
    noise[k] = noise_spectrum(ch, w);
    if (sig[k] < 1e-300) {
      throw std::domain_error(
          "channel power spectrum has a zero on the unit circle "
          "(h_sd == alpha*h_rd*h_sr); perturb h_sd to evaluate nearby");
    }
    ratio[k] = noise[k] / sig[k];
  }

  const auto [lo_it, hi_it] = std::minmax_element(ratio.begin(), ratio.end());
  double lo = *lo_it;
  double hi = *lo_it + power_budget + *hi_it;

  std::vector<double> power(n);
  const auto mean_power_at = [&](double level) {
    for (std::size_t k = 0; k < n; ++k) {
      power[k] = std::max(level - ratio[k], 0.0);
    }
    return pairwise_mean(power);
  };

  double lambda = hi;
  double used = mean_power_at(lambda);
  bool converged = used >= power_budget - tol && used <= power_budget;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    lambda = 0.5 * (lo + hi);
    used = mean_power_at(lambda);
    if (used > power_budget) {
      hi = lambda;
    } else if (used < power_budget - tol) {
      lo = lambda;
    } else {
      converged = true;
    }
  }
  if (!converged) {
    throw std::runtime_error("water level bisection did not reach the power tolerance");
  }

  std::vector<double> integrand(n);
  for (std::size_t k = 0; k < n; ++k) {
    integrand[k] = 0.5 * log2_1p(power[k] * sig[k] / noise[k]);
  }

  WaterFillingSolution sol;
  sol.lambda = lambda;
  grid.values = std::move(power);
  sol.power = std::move(grid);
  sol.rate_bits = RateBits{pairwise_mean(integrand)};
  sol.power_used = used;
  return sol;
}

RateBits flat_rate_closed_form(const IsiChannel& ch) {
  const double a_total = ch.a_noise + ch.a_sig;
  const double b_total = ch.b_noise + ch.b_sig;
  if (!(ch.a_noise >= std::abs(ch.b_noise))) {
    throw std::domain_error("noise spectrum must be nonnegative (a_noise >= |b_noise|)");
  }
  if (!(a_total > std::abs(b_total))) {
    throw std::domain_error(
        "signal-plus-noise spectrum has a zero; the equal-power closed form "
        "requires a + b cos(w) > 0");
  }
  // (1/2pi) \int ln(a + b cos w) dw = ln((a + sqrt((a-b)(a+b)))/2); the rate
  // is half the difference of the two integrals in log2.
  const double top = a_total + std::sqrt((a_total - b_total) * (a_total + b_total));
  const double bn = std::abs(ch.b_noise);
  const double bottom =
      ch.a_noise + std::sqrt((ch.a_noise - bn) * (ch.a_noise + bn));
  return RateBits{0.5 * std::log2(top / bottom)};
}

std::vector<double> af_gap_divergence(double h_sd, double h_sr,
                                      std::span<const double> h_rd_seq,
                                      double rho_z, std::size_t n_points) {
  if (h_rd_seq.empty()) {
    throw std::invalid_argument("h_rd sequence must be nonempty");
  }
  for (std::size_t i = 1; i < h_rd_seq.size(); ++i) {
    if (!(h_rd_seq[i] > h_rd_seq[i - 1])) {
      throw std::invalid_argument("h_rd sequence must be strictly increasing");
    }
  }
  const double limit_sign = rho_z < 0.0 ? -1.0 : 1.0;
  std::vector<double> gaps;
  gaps.reserve(h_rd_seq.size());
  for (const double h_rd : h_rd_seq) {
    const ChannelParams p{h_sd, h_sr, h_rd, rho_z};
    const RateBits af = waterfill(build_isi(p), n_points).rate_bits;
    const auto [ub1, ub2] =
        relaxed_cutset(ChannelParams{h_sd, h_sr, h_rd, limit_sign});
    gaps.push_back(min(ub1, ub2).bits - af.bits);
  }
  return gaps;
}

}  // namespace relaycap
