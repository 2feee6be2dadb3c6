// relaycap: bounds and achievable rates for the three-node Gaussian relay
// channel with correlated relay/destination noises.
//
// Exit codes: 0 success, 1 usage error, 2 certification failure,
// 3 numerical-domain error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaycap/af_isi.hpp"
#include "relaycap/channel.hpp"
#include "relaycap/cutset.hpp"
#include "relaycap/mc_validate.hpp"
#include "relaycap/relaying.hpp"
#include "relaycap/sweep.hpp"

namespace {

struct GainFlags {
  double h_sd_db = 0.0;
  double h_sr_db = 0.0;
  double h_rd_db = 0.0;
};

void add_gain_flags(CLI::App* cmd, GainFlags* g) {
  cmd->add_option("--hsd-db", g->h_sd_db, "source->destination squared gain, dB");
  cmd->add_option("--hsr-db", g->h_sr_db, "source->relay squared gain, dB");
  cmd->add_option("--hrd-db", g->h_rd_db, "relay->destination squared gain, dB");
}

void print_kv(const char* key, double value) {
  std::printf("%-18s %.12g\n", key, value);
}

relaycap::CurveMask parse_curves(const std::vector<std::string>& names) {
  using relaycap::Curve;
  if (names.empty()) {
    return relaycap::kAllCurves;
  }
  relaycap::CurveMask mask = 0;
  for (const auto& name : names) {
    if (name == "cutset_relaxed") {
      mask |= relaycap::curve_bit(Curve::CutsetRelaxed);
    } else if (name == "cutset_exact") {
      mask |= relaycap::curve_bit(Curve::CutsetExact);
    } else if (name == "nnc") {
      mask |= relaycap::curve_bit(Curve::Nnc);
    } else if (name == "cf") {
      mask |= relaycap::curve_bit(Curve::Cf);
    } else if (name == "df") {
      mask |= relaycap::curve_bit(Curve::Df);
    } else if (name == "af") {
      mask |= relaycap::curve_bit(Curve::Af);
    } else {
      throw CLI::ValidationError("--curves", "unknown curve: " + name);
    }
  }
  return mask;
}

int run_rates(const GainFlags& gains, double rho_z, std::optional<double> manual_q,
              std::size_t grid, bool af_flat, double epsilon) {
  const relaycap::ChannelParams p =
      relaycap::params_from_db(gains.h_sd_db, gains.h_sr_db, gains.h_rd_db, rho_z);
  const relaycap::GapReport report = relaycap::gap_report(p, epsilon);
  const relaycap::CutsetResult cut = relaycap::exact_cutset(p);
  const relaycap::QuantizerChoice qs = relaycap::q_star(p);
  const relaycap::NncRates nnc = relaycap::nnc_rates(p, qs);

  print_kv("h_sd", p.h_sd);
  print_kv("h_sr", p.h_sr);
  print_kv("h_rd", p.h_rd);
  print_kv("rho_z", p.rho_z);
  print_kv("r_ub1", cut.r_ub1.bits);
  print_kv("r_ub2", cut.r_ub2.bits);
  print_kv("cutset_relaxed", cut.relaxed_bound.bits);
  print_kv("cutset_exact", cut.exact_bound.bits);
  print_kv("rho_x_star", cut.rho_x_star);
  print_kv("q_star", qs.q);
  print_kv("nnc_r1", nnc.r1);
  print_kv("nnc_r2", nnc.r2);
  print_kv("nnc", nnc.rate.bits);
  print_kv("nnc_gap_bound", relaycap::nnc_gap_bound(p, qs));
  if (p.h_rd > 0.0) {
    print_kv("q_c", relaycap::cf_quantizer(p).q);
    print_kv("cf", relaycap::cf_rate(p).bits);
  }
  print_kv("df", report.df.bits);
  const relaycap::IsiChannel ch = relaycap::build_isi(p);
  if (af_flat) {
    print_kv("af_flat", relaycap::flat_rate_closed_form(ch).bits);
  } else {
    const relaycap::WaterFillingSolution wf = relaycap::waterfill(ch, grid);
    print_kv("af", wf.rate_bits.bits);
    print_kv("af_lambda", wf.lambda);
    print_kv("af_power_used", wf.power_used);
  }
  if (manual_q) {
    const relaycap::NncRates manual =
        relaycap::nnc_rates(p, relaycap::manual_quantizer(*manual_q));
    print_kv("manual_q", *manual_q);
    print_kv("manual_r1", manual.r1);
    print_kv("manual_r2", manual.r2);
    print_kv("manual_rate", manual.rate.bits);
  }
  print_kv("gap_nnc", report.gap_nnc);
  if (report.gap_cf) {
    print_kv("gap_cf", *report.gap_cf);
  }
  print_kv("gap_df", report.gap_df);
  return 0;
}

int run_af(const GainFlags& gains, std::vector<double> hrd_db_list, double rho_z,
           std::size_t grid, bool af_flat, std::optional<double> alpha) {
  if (hrd_db_list.empty()) {
    hrd_db_list.push_back(gains.h_rd_db);
  }
  const double h_sd = relaycap::gain_from_db(gains.h_sd_db);
  const double h_sr = relaycap::gain_from_db(gains.h_sr_db);

  if (hrd_db_list.size() == 1) {
    const relaycap::ChannelParams p{h_sd, h_sr,
                                    relaycap::gain_from_db(hrd_db_list[0]), rho_z};
    const relaycap::IsiChannel ch =
        alpha ? relaycap::build_isi(p, *alpha) : relaycap::build_isi(p);
    print_kv("alpha", ch.alpha);
    print_kv("a_sig", ch.a_sig);
    print_kv("b_sig", ch.b_sig);
    print_kv("a_noise", ch.a_noise);
    print_kv("b_noise", ch.b_noise);
    print_kv("af_flat", relaycap::flat_rate_closed_form(ch).bits);
    if (!af_flat) {
      const relaycap::WaterFillingSolution wf = relaycap::waterfill(ch, grid);
      double s_min = wf.power.values.front(), s_max = s_min;
      for (const double s : wf.power.values) {
        s_min = std::min(s_min, s);
        s_max = std::max(s_max, s);
      }
      print_kv("af", wf.rate_bits.bits);
      print_kv("lambda", wf.lambda);
      print_kv("power_used", wf.power_used);
      print_kv("s_min", s_min);
      print_kv("s_max", s_max);
    }
    return 0;
  }

  // Divergence table: the cut-set reference is taken in the rho_z -> +-1
  // limit, where the bound reduces to the MAC cut.
  std::vector<double> h_rd_seq;
  h_rd_seq.reserve(hrd_db_list.size());
  for (const double db : hrd_db_list) {
    h_rd_seq.push_back(relaycap::gain_from_db(db));
  }
  const std::vector<double> af_gaps =
      relaycap::af_gap_divergence(h_sd, h_sr, h_rd_seq, rho_z, grid);
  const double limit_sign = rho_z < 0.0 ? -1.0 : 1.0;

  std::printf("hrd_db,af_rate,df_rate,cutset_limit,gap_af,gap_df\n");
  for (std::size_t i = 0; i < h_rd_seq.size(); ++i) {
    const relaycap::ChannelParams p{h_sd, h_sr, h_rd_seq[i], rho_z};
    const double af = relaycap::waterfill(relaycap::build_isi(p), grid).rate_bits.bits;
    const double df = relaycap::df_rate(p).bits;
    const auto [ub1, ub2] = relaycap::relaxed_cutset(
        relaycap::ChannelParams{h_sd, h_sr, h_rd_seq[i], limit_sign});
    const double cutset = relaycap::min(ub1, ub2).bits;
    std::printf("%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", hrd_db_list[i], af, df,
                cutset, af_gaps[i], cutset - df);
  }
  return 0;
}

int run_certify(std::size_t draws, std::uint64_t seed, double db_lo, double db_hi) {
  const relaycap::CertifySummary summary =
      relaycap::certify_gap(draws, seed, db_lo, db_hi);
  print_kv("draws", static_cast<double>(summary.n_draws));
  print_kv("threshold_bits", summary.threshold_bits);
  print_kv("max_gap_nnc", summary.max_gap_nnc);
  print_kv("max_gap_cf", summary.max_gap_cf);
  std::printf("worst_nnc_channel  h_sd=%.6g h_sr=%.6g h_rd=%.6g rho_z=%.6g\n",
              summary.argmax_nnc.h_sd, summary.argmax_nnc.h_sr,
              summary.argmax_nnc.h_rd, summary.argmax_nnc.rho_z);
  std::printf("result             %s\n", summary.pass ? "PASS" : "FAIL");
  return summary.pass ? 0 : 2;
}

int run_mc_validate(const GainFlags& gains, double rho_z,
                    std::optional<double> manual_q, std::size_t draws,
                    std::uint64_t seed) {
  using namespace relaycap;
  const ChannelParams p =
      params_from_db(gains.h_sd_db, gains.h_sr_db, gains.h_rd_db, rho_z);
  const QuantizerChoice q = manual_q ? manual_quantizer(*manual_q) : q_star(p);

  const EmpiricalCov emp = simulate_joint(p, q, draws, seed);
  const EmpiricalCov ana = analytic_joint_cov(p, q);
  const EmpiricalCov emp2 = simulate_coherent_pair(p, draws, seed + 1);
  const EmpiricalCov ana2 = analytic_coherent_cov(p);

  const std::size_t x[] = {kX};
  const std::size_t xr[] = {kXr};
  const std::size_t y[] = {kY};
  const std::size_t xxr[] = {kX, kXr};
  const std::size_t y_yrhat[] = {kY, kYrHat};
  const std::size_t y_yr[] = {kY, kYr};
  const std::size_t yr[] = {kYr};
  const std::size_t yrhat[] = {kYrHat};
  const std::size_t xxry[] = {kX, kXr, kY};
  const std::size_t pair_a[] = {0};
  const std::size_t pair_b[] = {1};

  const auto report = [](const char* name, double analytic, double empirical) {
    std::printf("%-22s analytic=%.12g empirical=%.12g |diff|=%.3g\n", name,
                analytic, empirical, std::abs(analytic - empirical));
  };

  const NncRates nnc = nnc_rates(p, q);
  const double r1_ana =
      gaussian_mi_from_cov(ana, xxr, y).bits - gaussian_mi_from_cov(ana, yr, yrhat, xxry).bits;
  const double r1_emp =
      gaussian_mi_from_cov(emp, xxr, y).bits - gaussian_mi_from_cov(emp, yr, yrhat, xxry).bits;
  report("r1(q)", nnc.r1, r1_emp);
  std::printf("%-22s closed_form=%.12g det_mi=%.12g\n", "r1 analytic-cov", nnc.r1,
              r1_ana);
  report("r2(q)", nnc.r2, gaussian_mi_from_cov(emp, x, y_yrhat, xr).bits);
  const auto [ub1, ub2] = relaxed_cutset(p);
  report("r_ub1", ub1.bits, gaussian_mi_from_cov(emp2, pair_a, pair_b).bits);
  report("r_ub2", ub2.bits, gaussian_mi_from_cov(emp, x, y_yr, xr).bits);

  const ConditionalVarianceCheck cv = conditional_variance_check(
      p, std::max<std::size_t>(draws, 100000), seed + 2);
  report("cond_variance", cv.analytic, cv.empirical);

  const double rho_emp =
      emp.at(kYr, kY) - p.h_sr * p.h_sd;  // cov(y_r, y) minus the signal part
  report("noise_correlation", p.rho_z, rho_emp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Capacity bounds and relaying rates for the Gaussian relay channel "
      "with correlated noises"};
  app.require_subcommand(1);

  // rates
  auto* rates = app.add_subcommand("rates", "Bounds, rates and gaps at one point");
  GainFlags rates_gains;
  add_gain_flags(rates, &rates_gains);
  double rates_rho = 0.0;
  std::optional<double> rates_q;
  std::size_t rates_grid = 4096;
  bool rates_af_flat = false;
  double rates_eps = 1e-6;
  rates->add_option("--rho-z", rates_rho, "noise correlation");
  rates->add_option("--q", rates_q, "also evaluate NNC at this quantizer variance");
  rates->add_option("--grid", rates_grid, "AF quadrature points")->default_val(4096);
  rates->add_flag("--af-flat", rates_af_flat, "equal-power AF closed form");
  rates->add_option("--epsilon", rates_eps, "|rho_z| clamp margin");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep rho_z and emit CSV");
  GainFlags sweep_gains;
  add_gain_flags(sweep, &sweep_gains);
  relaycap::SweepSpec spec;
  std::vector<std::string> curve_names;
  std::string out_path;
  std::string svg_path;
  sweep->add_option("--rho-lo", spec.rho_lo, "sweep start")->capture_default_str();
  sweep->add_option("--rho-hi", spec.rho_hi, "sweep end")->capture_default_str();
  sweep->add_option("--steps", spec.steps, "number of rows")->capture_default_str();
  sweep->add_option("--curves", curve_names,
                    "subset of cutset_relaxed,cutset_exact,nnc,cf,df,af");
  sweep->add_option("--grid", spec.af_grid, "AF quadrature points")
      ->capture_default_str();
  sweep->add_flag("--af-flat", spec.af_flat, "equal-power AF closed form");
  sweep->add_flag("--allow-unit-rho", spec.allow_unit_rho,
                  "admit |rho_z| up to 1 (finite-rate cells go absent there)");
  sweep->add_option("--epsilon", spec.epsilon, "|rho_z| clamp margin")
      ->capture_default_str();
  sweep->add_option("--seed", spec.seed, "seed for Monte Carlo columns");
  sweep->add_option("--out", out_path, "CSV path (default stdout)");
  sweep->add_option("--svg", svg_path, "also render a line chart");

  // certify-gap
  auto* certify = app.add_subcommand("certify-gap",
                                     "Randomized constant-gap certification");
  std::size_t certify_draws = 10000;
  std::uint64_t certify_seed = 1;
  double db_lo = -60.0, db_hi = 60.0;
  certify->add_option("--draws", certify_draws, "random channels")
      ->capture_default_str();
  certify->add_option("--seed", certify_seed, "RNG seed")->capture_default_str();
  certify->add_option("--db-lo", db_lo, "squared-gain dB lower bound")
      ->capture_default_str();
  certify->add_option("--db-hi", db_hi, "squared-gain dB upper bound")
      ->capture_default_str();

  // af
  auto* af = app.add_subcommand(
      "af", "Amplify-and-forward: water-filling detail or divergence table");
  GainFlags af_gains;
  af->add_option("--hsd-db", af_gains.h_sd_db, "source->destination squared gain, dB");
  af->add_option("--hsr-db", af_gains.h_sr_db, "source->relay squared gain, dB");
  std::vector<double> af_hrd_db;
  double af_rho = 0.0;
  std::size_t af_grid = 4096;
  bool af_flat = false;
  std::optional<double> af_alpha;
  af->add_option("--hrd-db", af_hrd_db,
                 "relay->destination squared gain, dB (repeat for a divergence table)");
  af->add_option("--rho-z", af_rho, "noise correlation");
  af->add_option("--grid", af_grid, "quadrature points")->default_val(4096);
  af->add_flag("--af-flat", af_flat, "equal-power closed form only");
  af->add_option("--alpha", af_alpha, "relay scaling (default: power-constraint bound)");

  // mc-validate
  auto* mc = app.add_subcommand("mc-validate",
                                "Monte Carlo cross-check of the closed forms");
  GainFlags mc_gains;
  add_gain_flags(mc, &mc_gains);
  double mc_rho = 0.0;
  std::optional<double> mc_q;
  std::size_t mc_draws = 1000000;
  std::uint64_t mc_seed = 1;
  mc->add_option("--rho-z", mc_rho, "noise correlation");
  mc->add_option("--q", mc_q, "quantizer variance (default q_star)");
  mc->add_option("--draws", mc_draws, "sample count")->capture_default_str();
  mc->add_option("--seed", mc_seed, "RNG seed")->capture_default_str();

  // df-touch
  auto* touch = app.add_subcommand(
      "df-touch", "Locate where decode-and-forward meets the exact cut-set bound");
  GainFlags touch_gains;
  add_gain_flags(touch, &touch_gains);
  relaycap::SweepSpec touch_spec;
  double touch_tol = 1e-6;
  touch->add_option("--rho-lo", touch_spec.rho_lo, "search start")
      ->capture_default_str();
  touch->add_option("--rho-hi", touch_spec.rho_hi, "search end")
      ->capture_default_str();
  touch->add_option("--steps", touch_spec.steps, "prescan grid size")
      ->capture_default_str();
  touch->add_option("--tol", touch_tol, "rho_z tolerance")->capture_default_str();
  touch->add_option("--epsilon", touch_spec.epsilon, "|rho_z| clamp margin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (rates->parsed()) {
      return run_rates(rates_gains, rates_rho, rates_q, rates_grid, rates_af_flat,
                       rates_eps);
    }
    if (sweep->parsed()) {
      spec.h_sd_db = sweep_gains.h_sd_db;
      spec.h_sr_db = sweep_gains.h_sr_db;
      spec.h_rd_db = sweep_gains.h_rd_db;
      spec.curves = parse_curves(curve_names);
      const std::vector<relaycap::SweepRow> rows = relaycap::run_sweep(spec);
      if (out_path.empty()) {
        std::fputs(relaycap::csv_from_rows(rows).c_str(), stdout);
      } else {
        relaycap::emit_csv(rows, out_path);
      }
      if (!svg_path.empty()) {
        relaycap::emit_svg(rows, svg_path);
      }
      return 0;
    }
    if (certify->parsed()) {
      return run_certify(certify_draws, certify_seed, db_lo, db_hi);
    }
    if (af->parsed()) {
      return run_af(af_gains, af_hrd_db, af_rho, af_grid, af_flat, af_alpha);
    }
    if (mc->parsed()) {
      return run_mc_validate(mc_gains, mc_rho, mc_q, mc_draws, mc_seed);
    }
    if (touch->parsed()) {
      touch_spec.h_sd_db = touch_gains.h_sd_db;
      touch_spec.h_sr_db = touch_gains.h_sr_db;
      touch_spec.h_rd_db = touch_gains.h_rd_db;
      const relaycap::TouchPointResult r =
          relaycap::find_df_touch_point(touch_spec, touch_tol);
      print_kv("rho_z", r.rho_z);
      print_kv("min_gap_bits", r.gap_bits);
      std::printf("touched            %s\n", r.touched ? "yes" : "no");
      return 0;
    }
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "numerical-domain error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
