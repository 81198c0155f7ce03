#include <cmath>

#include <benchmark/benchmark.h>

#include "bol/besov.hpp"
#include "bol/condition.hpp"
#include "bol/corpus.hpp"
#include "bol/grid.hpp"
#include "bol/molecules.hpp"
#include "bol/orlicz.hpp"
#include "bol/young.hpp"

namespace {

using namespace bol;

GridFunction disc(std::int64_t cells) { return ball_indicator(2, 1.0, 2.0 / static_cast<double>(cells)).function; }

void BM_TotalVariation(benchmark::State& state) {
  const auto f = disc(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(total_variation(f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_TotalVariation)->RangeMultiplier(4)->Range(64, 1024);

void BM_Luxemburg(benchmark::State& state) {
  CorpusOptions opt;
  opt.count = 1;
  opt.seed = 5;
  opt.max_extent = static_cast<std::size_t>(state.range(0));
  const auto f = random_piecewise_constant_corpus(opt).front();
  const auto phi = make_section5_young(0.1);
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(f, phi).norm);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_Luxemburg)->RangeMultiplier(4)->Range(32, 512);

void BM_ConditionValue(benchmark::State& state) {
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(critical_theta(1.3, 2));
  double s = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(condition_value(s, phi, psi, 2));
    s = s < 1e6 ? s * 1.5 : 0.37;
  }
}
BENCHMARK(BM_ConditionValue);

void BM_ConditionSup(benchmark::State& state) {
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(condition_sup(phi, psi, 2).D_hat);
}
BENCHMARK(BM_ConditionSup)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  CorpusOptions opt;
  opt.count = 1;
  opt.seed = 11;
  opt.max_extent = static_cast<std::size_t>(state.range(0));
  const auto f = random_piecewise_constant_corpus(opt).front();
  for (auto _ : state) benchmark::DoNotOptimize(decompose(f).molecules.size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_Decompose)->RangeMultiplier(4)->Range(32, 512)->Unit(benchmark::kMicrosecond);

void BM_ModulusTable(benchmark::State& state) {
  const auto f = disc(state.range(0));
  const auto phi = make_power_young(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(ModulusTable::build(f, phi, 0.5).max_value());
}
BENCHMARK(BM_ModulusTable)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BesovNorm(benchmark::State& state) {
  const auto f = disc(state.range(0));
  const auto phi = make_power_young(1.3);
  const auto psi = make_power_weight(critical_theta(1.3, 2));
  for (auto _ : state) benchmark::DoNotOptimize(besov_orlicz_norm(f, phi, psi).total);
}
BENCHMARK(BM_BesovNorm)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
