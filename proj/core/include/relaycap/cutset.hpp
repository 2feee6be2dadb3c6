#pragma once

#include <utility>

#include "relaycap/channel.hpp"

namespace relaycap {

struct CutsetResult {
  RateBits r_ub1;          // multiple-access cut, relaxed at rho_x = 1
  RateBits r_ub2;          // broadcast cut, relaxed at rho_x = 0
  RateBits relaxed_bound;  // min of the two relaxed cuts
  RateBits exact_bound;    // max over rho_x of the min of the unrelaxed cuts
  double rho_x_star{0.0};
};

// Relaxed cut-set pair:
//   r_ub1 = 1/2 log2(1 + (h_sd + h_rd)^2)
//   r_ub2 = 1/2 log2(1 + (h_sd^2 + h_sr^2 - 2 rho_z h_sd h_sr)/(1 - rho_z^2))
// At |rho_z| = 1 the broadcast cut is +infinity unless its numerator vanishes
// (h_sd == rho_z * h_sr), which is rejected as an undefined 0/0.
std::pair<RateBits, RateBits> relaxed_cutset(const ChannelParams& p);

// Exact max-min cut-set bound over the input correlation rho_x in [0, 1].
// The MAC cut is nondecreasing and the broadcast cut nonincreasing in rho_x,
// so the maximizer is either a boundary or the unique crossing, found by
// bisection to tolerance tol on rho_x. Requires |rho_z| < 1.
CutsetResult exact_cutset(const ChannelParams& p, double tol = 1e-10);

}  // namespace relaycap
