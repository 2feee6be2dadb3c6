#include "relaycap/cutset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaycap/numerics.hpp"
#include "relaycap/optim.hpp"

namespace relaycap {
namespace {

// h_sd^2 + h_sr^2 - 2 rho_z h_sd h_sr, written as a sum of squares so it
// never cancels: (h_sd - rho_z h_sr)^2 + (1 - rho_z^2) h_sr^2.
double broadcast_numerator(const ChannelParams& p) {
  const double d = p.h_sd - p.rho_z * p.h_sr;
  return d * d + (1.0 - p.rho_z) * (1.0 + p.rho_z) * p.h_sr * p.h_sr;
}

double one_minus_rho2(double rho) { return (1.0 - rho) * (1.0 + rho); }

}  // namespace

std::pair<RateBits, RateBits> relaxed_cutset(const ChannelParams& p) {
  validate(p);
  const double coherent = p.h_sd + p.h_rd;
  const RateBits ub1{0.5 * log2_1p(coherent * coherent)};

  const double num = broadcast_numerator(p);
  const double den = one_minus_rho2(p.rho_z);
  if (den == 0.0) {
    if (num == 0.0) {
      throw std::domain_error(
          "broadcast cut is 0/0 at |rho_z| = 1 with h_sd == rho_z*h_sr; "
          "no finite-rate limit policy is defined here");
    }
    return {ub1, RateBits{std::numeric_limits<double>::infinity()}};
  }
  const RateBits ub2{0.5 * log2_1p(num / den)};
  return {ub1, ub2};
}

CutsetResult exact_cutset(const ChannelParams& p, double tol) {
  validate(p);
  if (std::abs(p.rho_z) >= 1.0) {
    throw std::domain_error("exact cut-set bound requires |rho_z| < 1");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }

  const auto [ub1, ub2] = relaxed_cutset(p);
  const double cross = 2.0 * p.h_sd * p.h_rd;
  const double base = p.h_sd * p.h_sd + p.h_rd * p.h_rd;
  const double c = broadcast_numerator(p) / one_minus_rho2(p.rho_z);

  // MAC cut, nondecreasing in rho_x.
  const auto f1 = [&](double rho_x) { return 0.5 * log2_1p(base + cross * rho_x); };
  // Broadcast cut, nonincreasing in rho_x.
  const auto f2 = [&](double rho_x) {
    return 0.5 * log2_1p((1.0 - rho_x * rho_x) * c);
  };
  const auto diff = [&](double rho_x) { return f1(rho_x) - f2(rho_x); };

  CutsetResult result;
  result.r_ub1 = ub1;
  result.r_ub2 = ub2;
  result.relaxed_bound = min(ub1, ub2);

  double rho_x = 0.0;
  if (cross == 0.0) {
    rho_x = 0.0;  // MAC cut is flat in rho_x; the broadcast cut peaks at 0
  } else if (diff(0.0) >= 0.0) {
    rho_x = 0.0;  // broadcast cut already the bottleneck; rho_x cannot help
  } else if (diff(1.0) <= 0.0) {
    rho_x = 1.0;  // MAC cut stays the bottleneck; full coherence is best
  } else {
    rho_x = bisect_root(diff, 0.0, 1.0, tol);
  }
  result.rho_x_star = rho_x;
  result.exact_bound = RateBits{std::min(f1(rho_x), f2(rho_x))};
  return result;
}

}  // namespace relaycap
