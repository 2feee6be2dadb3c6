#include <benchmark/benchmark.h>

#include "relaycap/af_isi.hpp"
#include "relaycap/cutset.hpp"
#include "relaycap/mc_validate.hpp"
#include "relaycap/relaying.hpp"
#include "relaycap/sweep.hpp"

namespace {

const relaycap::ChannelParams kChannel{1.0, 2.0, 2.0, 0.5};

void BM_NncRates(benchmark::State& state) {
  const relaycap::QuantizerChoice q = relaycap::q_star(kChannel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycap::nnc_rates(kChannel, q));
  }
}
BENCHMARK(BM_NncRates);

void BM_CfRate(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycap::cf_rate(kChannel));
  }
}
BENCHMARK(BM_CfRate);

void BM_ExactCutset(benchmark::State& state) {
  const relaycap::ChannelParams crossing{1.0, 5.0, 1.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycap::exact_cutset(crossing));
  }
}
BENCHMARK(BM_ExactCutset);

void BM_GapReport(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycap::gap_report(kChannel));
  }
}
BENCHMARK(BM_GapReport);

void BM_Waterfill(benchmark::State& state) {
  const relaycap::IsiChannel ch = relaycap::build_isi(kChannel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycap::waterfill(ch, state.range(0)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Waterfill)->RangeMultiplier(2)->Range(256, 8192)->Complexity();

void BM_FlatClosedForm(benchmark::State& state) {
  const relaycap::IsiChannel ch = relaycap::build_isi(kChannel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycap::flat_rate_closed_form(ch));
  }
}
BENCHMARK(BM_FlatClosedForm);

void BM_CertifyGap(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycap::certify_gap(state.range(0), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CertifyGap)->Arg(100)->Arg(1000);

void BM_SimulateJoint(benchmark::State& state) {
  const relaycap::QuantizerChoice q = relaycap::q_star(kChannel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        relaycap::simulate_joint(kChannel, q, state.range(0), 42));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateJoint)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
