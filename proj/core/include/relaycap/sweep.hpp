#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaycap/channel.hpp"

namespace relaycap {

enum class Curve : unsigned {
  CutsetRelaxed = 1u << 0,
  CutsetExact = 1u << 1,
  Nnc = 1u << 2,
  Cf = 1u << 3,
  Df = 1u << 4,
  Af = 1u << 5,
};

using CurveMask = unsigned;
inline constexpr CurveMask kAllCurves = 0x3fu;

constexpr CurveMask curve_bit(Curve c) { return static_cast<CurveMask>(c); }
constexpr bool has_curve(CurveMask m, Curve c) { return (m & curve_bit(c)) != 0; }

// One sweep over rho_z at fixed gains. Gains are squared-gain dB. Finite-rate
// curves (both cut-set columns, NNC at q_star, CF) are evaluated only where
// |rho_z| <= 1 - epsilon; with allow_unit_rho the range may reach +-1 and the
// DF/AF columns keep evaluating there while the finite-rate cells go absent.
struct SweepSpec {
  double h_sd_db{0.0};
  double h_sr_db{0.0};
  double h_rd_db{0.0};
  double rho_lo{-0.999};
  double rho_hi{0.999};
  std::size_t steps{101};
  CurveMask curves{kAllCurves};
  std::size_t af_grid{4096};
  bool af_flat{false};         // equal-power closed form instead of water-filling
  bool allow_unit_rho{false};
  double epsilon{1e-6};
  std::uint64_t seed{0};  // reserved for Monte Carlo columns; sweep is closed form
};

// Absent cells mean the column was not requested or the point was outside the
// column's domain (reported once on stderr, never fatal).
struct SweepRow {
  double rho_z{0.0};
  std::optional<double> cutset_relaxed;
  std::optional<double> cutset_exact;
  std::optional<double> nnc;
  std::optional<double> cf;
  std::optional<double> df;
  std::optional<double> af;
};

// Rows in increasing rho_z, computed in parallel, deterministic.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// CSV with the fixed header rho_z,cutset_relaxed,cutset_exact,nnc,cf,df,af,
// 17 significant digits (lossless double round-trip), LF line endings,
// absent cells empty.
std::string csv_from_rows(std::span<const SweepRow> rows);
void emit_csv(std::span<const SweepRow> rows, const std::string& path);
std::vector<SweepRow> parse_csv(const std::string& text);

// Single-panel line chart of the sweep; convenience output only.
std::string svg_from_rows(std::span<const SweepRow> rows);
void emit_svg(std::span<const SweepRow> rows, const std::string& path);

struct CertifySummary {
  std::size_t n_draws{0};
  double threshold_bits{0.0};  // 1/2 log2(3) + slack
  double max_gap_nnc{0.0};
  double max_gap_cf{0.0};
  ChannelParams argmax_nnc;
  ChannelParams argmax_cf;
  bool pass{false};
};

// Draws n channels with squared-gain dB uniform in [db_lo, db_hi] and rho_z
// uniform in [-0.999, 0.999], and checks the NNC and CF gaps against the
// relaxed cut-set bound. The NNC gap uses the unclamped min(r1, r2) at
// q_star. Fails iff any observed gap reaches 1/2 log2(3) + 1e-5.
CertifySummary certify_gap(std::size_t n_draws, std::uint64_t seed,
                           double db_lo = -60.0, double db_hi = 60.0);

struct TouchPointResult {
  double rho_z{0.0};
  double gap_bits{0.0};
  bool touched{false};  // minimum gap below 1e-3 bits
};

// Locates the rho_z minimizing exact cut-set minus DF rate: a coarse prescan
// over the sweep grid followed by golden-section refinement to tol on rho_z.
// A minimum gap above 1e-3 bits is reported as "no touch", not an error.
TouchPointResult find_df_touch_point(const SweepSpec& spec, double tol = 1e-6);

}  // namespace relaycap
