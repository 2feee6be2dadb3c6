#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "relaycap/cutset.hpp"
#include "relaycap/optim.hpp"
#include "relaycap/relaying.hpp"
#include "test_util.hpp"

using namespace relaycap;

namespace {

constexpr double kHalfLog2_3 = 0.792481250360578;

}  // namespace

TEST_CASE("q_star follows the correlation") {
  CHECK(q_star({1, 1, 1, 0.0}).q == 2.0);
  CHECK(q_star({1, 1, 1, 0.5}).q == 1.5);
  CHECK(q_star({1, 1, 1, 0.999}).q == doctest::Approx(0.003998).epsilon(1e-12));
  CHECK(q_star({1, 1, 1, -0.999}).q == doctest::Approx(0.003998).epsilon(1e-12));
  CHECK(q_star({1, 1, 1, 0.3}).origin == QuantizerOrigin::Star);
  CHECK_THROWS_AS(q_star({1, 1, 1, 1.0}), std::domain_error);
  CHECK_THROWS_AS(q_star({1, 1, 1, -1.0}), std::domain_error);
}

TEST_CASE("nnc rate pair on hand-evaluated channels") {
  const ChannelParams p{1, 2, 2, 0.5};
  const NncRates at_star = nnc_rates(p, q_star(p));
  CHECK(at_star.r1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at_star.r2 == doctest::Approx(kHalfLog2_3).epsilon(1e-14));
  CHECK(at_star.rate.bits == doctest::Approx(kHalfLog2_3).epsilon(1e-14));

  // rho_z = 0, q = 2, unit gains: ratio forms are 3/1.5 and 7/3
  const NncRates unit = nnc_rates({1, 1, 1, 0.0}, manual_quantizer(2.0));
  CHECK(unit.r1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(unit.r2 == doctest::Approx(0.611196210668224).epsilon(1e-14));
}

TEST_CASE("relay-less channel caps at the direct link") {
  const ChannelParams p{1.5, 0, 0, 0.2};
  const double direct = 0.5 * std::log2(1.0 + p.h_sd * p.h_sd);
  for (const double q : {0.5, 2.0, 1e3, 1e6}) {
    const NncRates r = nnc_rates(p, manual_quantizer(q));
    CHECK(r.rate.bits <= direct + 1e-12);
  }
}

TEST_CASE("raw r1 may be negative but the usable rate clamps at zero") {
  const NncRates r = nnc_rates({1e-3, 1e-3, 1e-3, 0.0}, manual_quantizer(0.01));
  CHECK(r.r1 < 0.0);
  CHECK(r.r2 >= 0.0);
  CHECK(r.rate.bits == 0.0);
}

TEST_CASE("r1 grows and r2 shrinks with the quantizer") {
  testutil::ChannelDraw draw(23, -40, 40, 0.99);
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> log_q(-6.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const ChannelParams p = draw();
    double qa = std::exp(log_q(rng));
    double qb = std::exp(log_q(rng));
    if (qa > qb) {
      std::swap(qa, qb);
    }
    const NncRates ra = nnc_rates(p, manual_quantizer(qa));
    const NncRates rb = nnc_rates(p, manual_quantizer(qb));
    CHECK(rb.r1 >= ra.r1 - 1e-12);
    CHECK(rb.r2 <= ra.r2 + 1e-12);
  }
}

TEST_CASE("nnc gap bound") {
  // equalized at q_star for any correlation
  for (const double rho : {0.0, 0.3, -0.7, 0.99, -0.999}) {
    const ChannelParams p{1, 1, 1, rho};
    CHECK(nnc_gap_bound(p, q_star(p)) ==
          doctest::Approx(kHalfLog2_3).epsilon(1e-13));
  }
  CHECK(nnc_gap_bound({1, 1, 1, 0.0}, manual_quantizer(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nnc_gap_bound({1, 1, 1, 0.0}, manual_quantizer(4.0)) ==
        doctest::Approx(1.160964047443681).epsilon(1e-14));
  CHECK_THROWS_AS(nnc_gap_bound({1, 1, 1, 0.0}, manual_quantizer(0.0)),
                  std::domain_error);
}

TEST_CASE("cf quantizer on hand-evaluated channels") {
  CHECK(cf_quantizer({1, 2, 2, 0.5}).q == 0.9375);
  CHECK(cf_quantizer({1, 2, 2, 0.5}).origin == QuantizerOrigin::CfConstraint);
  CHECK(cf_quantizer({2, 2, 1, 1.0}).q == 0.0);
  CHECK(cf_quantizer({0, 1, 1, 0.0}).q == 2.0);
  CHECK_THROWS_AS(cf_quantizer({1, 2, 0, 0.5}), std::domain_error);
}

TEST_CASE("cf rate on hand-evaluated channels") {
  CHECK(cf_rate({1, 2, 2, 0.5}).bits ==
        doctest::Approx(0.8684827970831032).epsilon(1e-14));

  // 0/0 at unit correlation: relay term vanishes
  CHECK(cf_rate({2, 2, 1, 1.0}).bits ==
        doctest::Approx(0.5 * std::log2(5.0)).epsilon(1e-14));

  // unit correlation with distinct gains: the ratio collapses to h_rd^2
  CHECK(cf_rate({1, 2, 2, 1.0}).bits ==
        doctest::Approx(1.292481250360578).epsilon(1e-12));
  // continuity of the same value just inside the boundary
  CHECK(cf_rate({1, 2, 2, 1.0 - 1e-12}).bits ==
        doctest::Approx(1.292481250360578).epsilon(1e-9));
}

TEST_CASE("cf is the fixed point and maximum of the nnc pair") {
  testutil::ChannelDraw draw(31, -60, 60, 0.999);
  for (int i = 0; i < 1000; ++i) {
    const ChannelParams p = draw();
    const double cf = cf_rate(p).bits;
    const NncRates at_qc = nnc_rates(p, cf_quantizer(p));
    CHECK(std::abs(at_qc.r1 - cf) <= 1e-9 * std::abs(cf));
    CHECK(std::abs(at_qc.r2 - cf) <= 1e-9 * std::abs(cf));

    const NncRates at_star = nnc_rates(p, q_star(p));
    CHECK(cf >= std::min(at_star.r1, at_star.r2) - 1e-12);
  }
}

TEST_CASE("golden-section search over q cannot beat the cf quantizer") {
  testutil::ChannelDraw draw(37, -30, 30, 0.99);
  for (int i = 0; i < 100; ++i) {
    const ChannelParams p = draw();
    const double cf = cf_rate(p).bits;
    const auto min_rate_at = [&](double log_q) {
      const NncRates r = nnc_rates(p, manual_quantizer(std::exp(log_q)));
      return std::min(r.r1, r.r2);
    };
    const ScalarSearchResult best =
        golden_section_max(min_rate_at, std::log(1e-9), std::log(1e9), 1e-8);
    CHECK(best.fx <= cf + 1e-7);
    CHECK(best.fx >= cf - 1e-7);
  }
}

TEST_CASE("df rate branches") {
  // strong relay regime: relay decoding is the bottleneck
  CHECK(df_rate({10, 100, 1000, 0.0}).bits ==
        doctest::Approx(6.643928320920272).epsilon(1e-14));

  // weak source-relay link: relay ignored
  const ChannelParams weak{2, 1, 5, 0.4};
  CHECK(df_rate(weak).bits == 0.5 * std::log2(1.0 + 4.0));

  CHECK(df_rate({1, 2, 2, 0.9}).bits ==
        doctest::Approx(1.160964047443681).epsilon(1e-14));
}

TEST_CASE("df never depends on the noise correlation") {
  const double reference = df_rate({1, 2, 2, 0.0}).bits;
  for (double rho = -1.0; rho <= 1.0; rho += 0.125) {
    CHECK(df_rate({1, 2, 2, rho}).bits == reference);
  }
}

TEST_CASE("df gap grows by half log2 of the gain ratio per step") {
  // rho_z -> 1 regime: the cut-set bound reduces to the MAC cut while DF
  // stays pinned at the source-relay link
  const double h_sd = 10.0, h_sr = 100.0;
  const double step_target = 0.5 * std::log2(100.0);
  double prev_gap = 0.0;
  bool have_prev = false;
  for (const double db : {40.0, 60.0, 80.0, 100.0}) {
    const double h_rd = gain_from_db(db);
    const auto [ub1, ub2] = relaxed_cutset({h_sd, h_sr, h_rd, 1.0});
    const double gap = min(ub1, ub2).bits - df_rate({h_sd, h_sr, h_rd, 0.999}).bits;
    if (have_prev) {
      CHECK(gap > prev_gap);
      CHECK(std::abs(gap - prev_gap - step_target) < 0.05 * step_target);
    }
    prev_gap = gap;
    have_prev = true;
  }
}

TEST_CASE("gap report aggregates bounds and rates") {
  const GapReport report = gap_report({1, 2, 2, 0.5});
  CHECK(report.cutset.bits == doctest::Approx(1.160964047443681).epsilon(1e-14));
  CHECK(report.nnc.bits == doctest::Approx(kHalfLog2_3).epsilon(1e-14));
  CHECK(report.gap_nnc == doctest::Approx(0.368482797083103).epsilon(1e-12));
  CHECK(report.gap_nnc < 0.79249);
  REQUIRE(report.cf.has_value());
  CHECK(report.cf->bits == doctest::Approx(0.8684827970831032).epsilon(1e-13));
  CHECK(report.df.bits == doctest::Approx(1.160964047443681).epsilon(1e-14));

  CHECK_THROWS_AS(gap_report({1, 2, 2, 0.9999999}), std::domain_error);
}

TEST_CASE("gap report with a silent relay") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> db(-40.0, 40.0);
  for (int i = 0; i < 200; ++i) {
    const ChannelParams p{gain_from_db(db(rng)), 0, 0, 0.3};
    const GapReport report = gap_report(p);
    CHECK(!report.cf.has_value());
    CHECK(report.gap_nnc <= half_log2_3() + 1e-9);
  }
}

TEST_CASE("nnc gap stays below the constant over random channels") {
  testutil::ChannelDraw draw(43, -60, 60, 0.999);
  for (int i = 0; i < 2000; ++i) {
    const GapReport report = gap_report(draw());
    CHECK(report.gap_nnc >= 0.0);
    CHECK(report.gap_nnc < 0.79249);
  }
}

TEST_CASE("highly correlated strong-relay corner") {
  // nnc keeps the constant gap while df falls far behind
  const ChannelParams p = params_from_db(20, 40, 100, 0.999);
  const GapReport report = gap_report(p);
  CHECK(report.gap_nnc < 0.79249);
  CHECK(report.gap_df > 4.3);

  // against the rho_z -> 1 cut-set limit the df shortfall is even larger
  const auto [ub1, ub2] = relaxed_cutset({p.h_sd, p.h_sr, p.h_rd, 1.0});
  CHECK(min(ub1, ub2).bits - report.df.bits > 5.0);
}
