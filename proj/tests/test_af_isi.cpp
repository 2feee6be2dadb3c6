#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "relaycap/af_isi.hpp"
#include "relaycap/cutset.hpp"
#include "test_util.hpp"

using namespace relaycap;

namespace {

// Independent quadrature oracle for the equal-power rate: midpoint rule on the
// raised-cosine spectra, no shared code with flat_rate_closed_form.
double flat_rate_midpoint(const IsiChannel& ch, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 2.0 * std::numbers::pi * (double(k) + 0.5) / double(n);
    const double c = std::cos(w);
    sum += 0.5 * std::log2(1.0 + (ch.a_sig + ch.b_sig * c) /
                                     (ch.a_noise + ch.b_noise * c));
  }
  return sum / double(n);
}

double rate_of_power(const IsiChannel& ch, const SpectrumGrid& power) {
  double sum = 0.0;
  for (std::size_t k = 0; k < power.n_points; ++k) {
    const double w = power.omega(k);
    sum += 0.5 * std::log2(1.0 + power.values[k] * signal_spectrum(ch, w) /
                                     noise_spectrum(ch, w));
  }
  return sum / double(power.n_points);
}

}  // namespace

TEST_CASE("isi conversion on a hand-evaluated channel") {
  const IsiChannel ch = build_isi({1, 2, 2, 0.5});
  CHECK(ch.alpha == doctest::Approx(0.4472135954999579).epsilon(1e-15));
  CHECK(ch.a_noise == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(ch.b_noise == doctest::Approx(0.8944271909999159).epsilon(1e-14));
  CHECK(ch.a_sig == doctest::Approx(4.2).epsilon(1e-14));
  CHECK(ch.b_sig == doctest::Approx(3.5777087639996634).epsilon(1e-14));
}

TEST_CASE("isi degenerate geometries") {
  const IsiChannel silent = build_isi({1.5, 2, 0, 0.5});
  CHECK(silent.a_noise == 1.0);
  CHECK(silent.b_noise == 0.0);
  CHECK(silent.a_sig == 1.5 * 1.5);
  CHECK(silent.b_sig == 0.0);

  const IsiChannel uncorrelated = build_isi({1, 2, 2, 0.0});
  CHECK(uncorrelated.b_noise == 0.0);

  CHECK(build_isi({1, 2, 2, 0.5}, 0.0).a_sig == 1.0);
  CHECK_THROWS_AS(build_isi({1, 2, 2, 0.5}, -0.1), std::domain_error);
  CHECK_THROWS_AS(build_isi({1, 2, 2, 0.5}, 0.5), std::domain_error);
}

TEST_CASE("noise spectrum stays nonnegative") {
  testutil::ChannelDraw draw(51, -40, 40, 1.0);
  for (int i = 0; i < 500; ++i) {
    const IsiChannel ch = build_isi(draw());
    CHECK(ch.a_noise >= std::abs(ch.b_noise));
  }
}

TEST_CASE("water-filling a flat channel spreads power evenly") {
  const WaterFillingSolution sol = waterfill(build_isi({1, 2, 0, 0.0}));
  CHECK(sol.rate_bits.bits == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.power_used >= 1.0 - 1e-9);
  CHECK(sol.power_used <= 1.0);
  for (const double s : sol.power.values) {
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("water-filling satisfies its contracts") {
  testutil::ChannelDraw draw(53, -30, 30, 0.9);
  for (int i = 0; i < 100; ++i) {
    const IsiChannel ch = build_isi(draw());
    const WaterFillingSolution sol = waterfill(ch);
    CHECK(sol.power_used >= 1.0 - 1e-9);
    CHECK(sol.power_used <= 1.0);
    for (std::size_t k = 0; k < sol.power.n_points; ++k) {
      const double s = sol.power.values[k];
      CHECK(s >= 0.0);
      if (s > 0.0) {
        const double w = sol.power.omega(k);
        const double ratio = noise_spectrum(ch, w) / signal_spectrum(ch, w);
        CHECK(s == sol.lambda - ratio);  // complementary slackness, exact
      }
    }
  }
}

TEST_CASE("water-filled rate sits between flat allocation and the cut-set bound") {
  const ChannelParams p{1, 2, 2, 0.5};
  const WaterFillingSolution sol = waterfill(build_isi(p), 4096);
  CHECK(sol.rate_bits.bits == doctest::Approx(0.7992910753919303).epsilon(1e-6));
  CHECK(sol.rate_bits.bits >= flat_rate_closed_form(build_isi(p)).bits - 1e-9);
  const auto [ub1, ub2] = relaxed_cutset(p);
  CHECK(sol.rate_bits.bits <= min(ub1, ub2).bits + 1e-9);
}

TEST_CASE("quadrature is converged at the default grid") {
  for (const ChannelParams& p :
       {ChannelParams{1, 2, 2, 0.5}, ChannelParams{2, 1, 3, -0.7},
        ChannelParams{10, 100, 1000, 0.999}}) {
    const IsiChannel ch = build_isi(p);
    const double coarse = waterfill(ch, 4096).rate_bits.bits;
    const double fine = waterfill(ch, 8192).rate_bits.bits;
    CHECK(std::abs(coarse - fine) < 1e-8);
  }
}

TEST_CASE("half-offset grid handles a noise spectrum zero") {
  // |rho_z| = 1 with alpha*h_rd = 1 puts a zero of N at w = pi while the
  // signal spectrum stays positive (h_sd != alpha*h_rd*h_sr)
  const ChannelParams p{1, 2, std::sqrt(5.0), 1.0};
  const IsiChannel ch = build_isi(p);
  CHECK(ch.a_noise == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ch.b_noise == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ch.a_sig == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(ch.b_sig == doctest::Approx(4.0).epsilon(1e-14));

  const WaterFillingSolution sol = waterfill(ch, 8192);
  CHECK(sol.power.offset == 0.5);
  CHECK(sol.rate_bits.is_finite());
  CHECK(sol.power_used >= 1.0 - 1e-9);
  CHECK(sol.power_used <= 1.0);

  // the log singularity is integrable; midpoint quadrature converges slowly
  // but surely to the closed form
  const double closed = flat_rate_closed_form(ch).bits;
  CHECK(std::abs(flat_rate_midpoint(ch, 1 << 15) - closed) < 5e-3);
}

TEST_CASE("exact spectral zero of the channel is rejected") {
  IsiChannel singular;
  singular.alpha = 0.5;
  singular.a_sig = 1.0;
  singular.b_sig = 1.0;  // |H|^2 = 1 + cos(w), zero at w = pi
  singular.a_noise = 1.0;
  singular.b_noise = 0.0;
  CHECK_THROWS_AS(waterfill(singular), std::domain_error);
}

TEST_CASE("waterfill validates grid and tolerance") {
  const IsiChannel ch = build_isi({1, 2, 2, 0.5});
  CHECK_THROWS_AS(waterfill(ch, 32), std::invalid_argument);
  CHECK_THROWS_AS(waterfill(ch, 4095), std::invalid_argument);
  CHECK_THROWS_AS(waterfill(ch, 4096, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(waterfill(ch, 4096, 1e-9, 0.0), std::invalid_argument);
}

TEST_CASE("closed-form flat rate matches hand evaluation") {
  CHECK(flat_rate_closed_form(build_isi({1, 2, 2, 0.5})).bits ==
        doctest::Approx(0.7862934711912231).epsilon(1e-12));

  const double direct = 0.5 * std::log2(1.0 + 2.25);
  CHECK(flat_rate_closed_form(build_isi({1.5, 2, 0, 0.5})).bits ==
        doctest::Approx(direct).epsilon(1e-14));

  // strong-relay, unit-correlation bound
  const IsiChannel strong = build_isi({10, 100, 1000, 1.0});
  const double bound = 0.5 * std::log2(2.0 + 100.0 * 100.0 + 10.0 * 10.0);
  CHECK(flat_rate_closed_form(strong).bits <= bound + 1e-12);
}

TEST_CASE("closed form agrees with quadrature over random channels") {
  testutil::ChannelDraw draw(59, -30, 30, 0.9);
  for (int i = 0; i < 100; ++i) {
    const IsiChannel ch = build_isi(draw());
    CHECK(std::abs(flat_rate_closed_form(ch).bits - flat_rate_midpoint(ch, 4096)) <
          1e-6);
  }
}

TEST_CASE("no zero-mean reallocation improves the water-filling solution") {
  const IsiChannel ch = build_isi({1, 2, 2, 0.5});
  const WaterFillingSolution sol = waterfill(ch, 4096);
  const double base = rate_of_power(ch, sol.power);

  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::size_t> pick(0, sol.power.n_points - 1);
  constexpr double eps = 1e-4;
  int tried = 0;
  while (tried < 200) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j || sol.power.values[j] < eps) {
      continue;
    }
    SpectrumGrid perturbed = sol.power;
    perturbed.values[i] += eps;
    perturbed.values[j] -= eps;
    CHECK(rate_of_power(ch, perturbed) <= base + 1e-9);
    ++tried;
  }
}

TEST_CASE("rate grows with the power budget") {
  const IsiChannel ch = build_isi({1, 2, 2, 0.5});
  const double half = waterfill(ch, 4096, 1e-9, 0.5).rate_bits.bits;
  const double one = waterfill(ch, 4096, 1e-9, 1.0).rate_bits.bits;
  const double two = waterfill(ch, 4096, 1e-9, 2.0).rate_bits.bits;
  CHECK(half < one);
  CHECK(one < two);
}

TEST_CASE("af gap diverges with the relay-destination gain") {
  const double h_sd = 10.0, h_sr = 100.0;
  const double h_rd_seq[] = {gain_from_db(60.0), gain_from_db(80.0)};
  const std::vector<double> gaps = af_gap_divergence(h_sd, h_sr, h_rd_seq, 0.999);
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[1] > gaps[0]);
  const double step_target = 0.5 * std::log2(100.0);
  CHECK(std::abs(gaps[1] - gaps[0] - step_target) < 0.05 * step_target);
}

TEST_CASE("af gap stays modest away from the divergent regime") {
  const double h_rd_seq[] = {2.0};
  const std::vector<double> gaps = af_gap_divergence(1.0, 2.0, h_rd_seq, 0.0);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0] < 3.0);
  CHECK(gaps[0] > 0.0);
}

TEST_CASE("af divergence rejects a non-increasing sequence") {
  const double bad[] = {10.0, 5.0};
  CHECK_THROWS_AS(af_gap_divergence(1.0, 2.0, bad, 0.9), std::invalid_argument);
  const std::vector<double> empty;
  CHECK_THROWS_AS(af_gap_divergence(1.0, 2.0, empty, 0.9), std::invalid_argument);
}
