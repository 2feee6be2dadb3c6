#pragma once

#include <optional>

#include "relaycap/channel.hpp"

namespace relaycap {

enum class QuantizerOrigin { Star, CfConstraint, Manual };

// Variance q of the additive quantization noise e in y_r_hat = y_r + e.
// q must be positive for finite rate evaluation; q == 0 appears only as the
// |rho_z| -> 1 limit of the link-constrained choice.
struct QuantizerChoice {
  double q{0.0};
  QuantizerOrigin origin{QuantizerOrigin::Manual};
};

inline QuantizerChoice manual_quantizer(double q) {
  return {q, QuantizerOrigin::Manual};
}

// Correlation-aware quantizer q = 2*(1 - rho_z^2); equalizes the two analytic
// gap terms. Rejects |rho_z| = 1.
QuantizerChoice q_star(const ChannelParams& p);

struct NncRates {
  double r1{0.0};  // MAC-side MI difference in bits; may be negative
  double r2{0.0};  // broadcast-side MI in bits; nonnegative
  RateBits rate;   // max(0, min(r1, r2))
  QuantizerChoice q_used;
};

// Noisy-network-coding rate pair at quantizer q:
//   r1 = 1/2 log2(1 + h_sd^2 + h_rd^2) - 1/2 log2(1 + (1-rho_z^2)/q)
//   r2 = 1/2 log2(1 + (q + (q+1) h_sd^2 + h_sr^2 - 2 rho_z h_sd h_sr)/(1-rho_z^2))
//        - 1/2 log2(1 + q/(1-rho_z^2))
// r1 is nondecreasing and r2 nonincreasing in q.
NncRates nnc_rates(const ChannelParams& p, const QuantizerChoice& q);

// Max of the two analytic gap terms,
//   1/2 log2(1 + (1-rho_z^2)/q) + 1/2  and  1/2 log2(1 + q/(1-rho_z^2)).
// Equals 1/2 log2(3) at q_star.
double nnc_gap_bound(const ChannelParams& p, const QuantizerChoice& q);

// Link-constrained quantizer
//   q_c = ((1-rho_z^2)(1 + h_sd^2) + (h_sr - rho_z h_sd)^2) / h_rd^2,
// finite for |rho_z| <= 1; undefined when h_rd == 0.
QuantizerChoice cf_quantizer(const ChannelParams& p);

// Compress-and-forward rate
//   R_cf = 1/2 log2(1 + h_sd^2 + (h_sr - rho_z h_sd)^2/(1 - rho_z^2 + q_c)).
// When numerator and denominator of the relay term both vanish (|rho_z| = 1
// with h_sr == rho_z h_sd) the term is taken as 0, its continuous limit.
// Satisfies R_cf == min(r1(q_c), r2(q_c)) == max over q of min(r1, r2).
RateBits cf_rate(const ChannelParams& p);

// Decode-and-forward: the relay is ignored when h_sr <= h_sd, otherwise it
// decodes and forwards. Independent of rho_z by construction.
RateBits df_rate(const ChannelParams& p);

struct GapReport {
  ChannelParams params;
  RateBits cutset;             // relaxed cut-set bound
  RateBits nnc;                // clamped min(r1, r2) at q_star
  std::optional<RateBits> cf;  // absent when h_rd == 0
  RateBits df;
  double gap_nnc{0.0};  // cutset - unclamped min(r1, r2), bits
  std::optional<double> gap_cf;
  double gap_df{0.0};
};

// Aggregates bounds, rates and gaps at one parameter point against the
// relaxed cut-set bound. Requires |rho_z| <= 1 - epsilon.
GapReport gap_report(const ChannelParams& p, double epsilon = 1e-6);

// 1/2 log2(3), the constant gap certified for NNC at q_star.
double half_log2_3();

}  // namespace relaycap
