#include "relaycap/relaying.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "relaycap/cutset.hpp"
#include "relaycap/numerics.hpp"

namespace relaycap {
namespace {

double one_minus_rho2(double rho) { return (1.0 - rho) * (1.0 + rho); }

void require_open_rho(const ChannelParams& p, const char* what) {
  if (std::abs(p.rho_z) >= 1.0) {
    throw std::domain_error(std::string(what) + " requires |rho_z| < 1");
  }
}

void require_positive_q(const QuantizerChoice& q) {
  if (!(q.q > 0.0) || !std::isfinite(q.q)) {
    throw std::domain_error("quantization variance q must be positive and finite");
  }
}

}  // namespace

double half_log2_3() { return 0.5 * std::log2(3.0); }

QuantizerChoice q_star(const ChannelParams& p) {
  validate(p);
  require_open_rho(p, "q_star");
  return {2.0 * one_minus_rho2(p.rho_z), QuantizerOrigin::Star};
}

NncRates nnc_rates(const ChannelParams& p, const QuantizerChoice& q) {
  validate(p);
  require_open_rho(p, "nnc_rates");
  require_positive_q(q);

  const double den = one_minus_rho2(p.rho_z);
  const double hsd2 = p.h_sd * p.h_sd;
  const double hsr2 = p.h_sr * p.h_sr;
  const double hrd2 = p.h_rd * p.h_rd;

  // r1 = 1/2 log2((1 + h_sd^2 + h_rd^2) / (1 + (1-rho^2)/q)) as a single
  // log1p of the ratio, which keeps tiny rates accurate.
  const double v1 = den / q.q;
  const double r1 = 0.5 * log2_1p((hsd2 + hrd2 - v1) / (1.0 + v1));

  // r2's numerator-minus-denominator is q*h_sd^2 + (h_sd - rho h_sr)^2 +
  // (1-rho^2) h_sr^2, a sum of squares, so r2 is manifestly nonnegative.
  const double d = p.h_sd - p.rho_z * p.h_sr;
  const double excess = q.q * hsd2 + d * d + den * hsr2;
  const double r2 = 0.5 * log2_1p(excess / (den + q.q));

  NncRates out;
  out.r1 = r1;
  out.r2 = r2;
  out.rate = RateBits{std::max(0.0, std::min(r1, r2))};
  out.q_used = q;
  return out;
}

double nnc_gap_bound(const ChannelParams& p, const QuantizerChoice& q) {
  validate(p);
  require_open_rho(p, "nnc_gap_bound");
  require_positive_q(q);
  const double den = one_minus_rho2(p.rho_z);
  const double mac_term = 0.5 * log2_1p(den / q.q) + 0.5;
  const double bc_term = 0.5 * log2_1p(q.q / den);
  return std::max(mac_term, bc_term);
}

QuantizerChoice cf_quantizer(const ChannelParams& p) {
  validate(p);
  if (p.h_rd <= 0.0) {
    throw std::domain_error("cf_quantizer requires h_rd > 0; the relay cannot forward");
  }
  const double den = one_minus_rho2(p.rho_z);
  const double d = p.h_sr - p.rho_z * p.h_sd;
  const double q = (den * (1.0 + p.h_sd * p.h_sd) + d * d) / (p.h_rd * p.h_rd);
  return {q, QuantizerOrigin::CfConstraint};
}

RateBits cf_rate(const ChannelParams& p) {
  const QuantizerChoice qc = cf_quantizer(p);
  const double den = one_minus_rho2(p.rho_z) + qc.q;
  const double d = p.h_sr - p.rho_z * p.h_sd;
  const double num = d * d;
  // den == 0 forces num == 0 (|rho_z| = 1 with h_sr == rho_z*h_sd); the relay
  // term is defined as its continuous limit 0.
  const double relay_term = den == 0.0 ? 0.0 : num / den;
  return RateBits{0.5 * log2_1p(p.h_sd * p.h_sd + relay_term)};
}

RateBits df_rate(const ChannelParams& p) {
  validate(p);
  const double direct = 0.5 * log2_1p(p.h_sd * p.h_sd);
  if (p.h_sr <= p.h_sd) {
    return RateBits{direct};  // relay ignored
  }
  const double decode = 0.5 * log2_1p(p.h_sr * p.h_sr);
  const double forward = 0.5 * log2_1p(p.h_sd * p.h_sd + p.h_rd * p.h_rd);
  return RateBits{std::max(direct, std::min(decode, forward))};
}

GapReport gap_report(const ChannelParams& p, double epsilon) {
  validate(p);
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (std::abs(p.rho_z) > 1.0 - epsilon) {
    throw std::domain_error("gap_report requires |rho_z| <= 1 - epsilon");
  }

  GapReport report;
  report.params = p;
  const auto [ub1, ub2] = relaxed_cutset(p);
  report.cutset = min(ub1, ub2);

  const NncRates nnc = nnc_rates(p, q_star(p));
  report.nnc = nnc.rate;
  report.gap_nnc = report.cutset.bits - std::min(nnc.r1, nnc.r2);

  report.df = df_rate(p);
  report.gap_df = report.cutset.bits - report.df.bits;

  if (p.h_rd > 0.0) {
    const RateBits cf = cf_rate(p);
    report.cf = cf;
    report.gap_cf = report.cutset.bits - cf.bits;
  }
  return report;
}

}  // namespace relaycap
