#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relaycap/channel.hpp"

namespace relaycap {

// Single-tap amplify-and-forward: the relay transmits alpha * y_r one symbol
// late, which turns the relay channel into a single-tap ISI channel with
// colored noise. Both spectra are raised cosines:
//   |H(w)|^2 = a_sig   + b_sig   * cos(w)
//   N(w)     = a_noise + b_noise * cos(w)
struct IsiChannel {
  double alpha{0.0};
  double a_sig{0.0};    // h_sd^2 + alpha^2 h_rd^2 h_sr^2
  double b_sig{0.0};    // 2 alpha h_rd h_sr h_sd
  double a_noise{1.0};  // 1 + alpha^2 h_rd^2
  double b_noise{0.0};  // 2 rho_z alpha h_rd
};

// Largest relay scaling permitted by the unit power constraint.
double max_relay_scaling(const ChannelParams& p);  // 1/sqrt(1 + h_sr^2)

IsiChannel build_isi(const ChannelParams& p);  // alpha at the power bound
IsiChannel build_isi(const ChannelParams& p, double alpha);

// Pointwise spectra. Out-of-line on purpose: the water-filling solver and its
// contract checks must see bit-identical values.
double signal_spectrum(const IsiChannel& ch, double omega);  // |H(w)|^2
double noise_spectrum(const IsiChannel& ch, double omega);   // N(w)

// Uniform samples of a 2*pi-periodic function at w_k = 2*pi*(k + offset)/n.
// offset 0.5 is used when the noise spectrum has a zero at w = 0 or pi so the
// integrable log singularity is never evaluated exactly.
struct SpectrumGrid {
  std::size_t n_points{0};
  double offset{0.0};
  std::vector<double> values;

  [[nodiscard]] double omega(std::size_t k) const;
};

struct WaterFillingSolution {
  double lambda{0.0};
  SpectrumGrid power;  // S(w) = max(lambda - N/|H|^2, 0)
  RateBits rate_bits;
  double power_used{0.0};
};

// Water-filling capacity of the ISI channel: bisects the water level until
// the grid-average power lands in [budget - tol, budget], then integrates
// 1/2 log2(1 + S |H|^2 / N) by the periodic trapezoid rule. n_points must be
// even and at least 64. Channels whose |H(w)|^2 vanishes on the grid are
// rejected; perturb h_sd slightly to evaluate near such points.
WaterFillingSolution waterfill(const IsiChannel& ch, std::size_t n_points = 4096,
                               double tol = 1e-9, double power_budget = 1.0);

// Equal power allocation S == 1 in closed form via
//   (1/2pi) \int_0^{2pi} ln(a + b cos w) dw = ln((a + sqrt(a^2 - b^2))/2),
// valid for a >= |b|. Equals the S == 1 quadrature rate exactly.
RateBits flat_rate_closed_form(const IsiChannel& ch);

// Gap between the cut-set bound and the water-filled AF rate for each
// relay-destination gain in h_rd_seq. The cut-set reference is evaluated in
// the rho_z -> +-1 limit (sign taken from rho_z), where the broadcast cut
// diverges and the bound reduces to the MAC cut; rho_z itself still shapes
// the AF noise spectrum. The sequence grows without bound as h_rd grows.
std::vector<double> af_gap_divergence(double h_sd, double h_sr,
                                      std::span<const double> h_rd_seq,
                                      double rho_z,
                                      std::size_t n_points = 4096);

}  // namespace relaycap
