#include <numbers>

#include <benchmark/benchmark.h>

#include "gtb/space.hpp"

namespace {

gtb::SpaceDefinition mixed() {
  return {{0, 1, 2.5, 5},
          {gtb::Polynomial{2}, gtb::Trigonometric{3, std::numbers::pi / 2}, gtb::Exponential{4, 10.0}},
          {2, 2}};
}

gtb::SpaceDefinition uniform(int intervals, gtb::SectionFamily family, int r) {
  gtb::SpaceDefinition def;
  for (int i = 0; i <= intervals; ++i) def.breakpoints.push_back(i);
  def.sections.assign(intervals, family);
  def.smoothness.assign(intervals - 1, r);
  return def;
}

void BM_BuildMixedExample(benchmark::State& state) {
  const auto def = mixed();
  for (auto _ : state) benchmark::DoNotOptimize(gtb::build_space(def));
}
BENCHMARK(BM_BuildMixedExample);

void BM_BuildUniformCubic(benchmark::State& state) {
  const auto def = uniform(static_cast<int>(state.range(0)), gtb::Polynomial{3}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gtb::build_space(def));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildUniformCubic)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void BM_BuildUniformTrig(benchmark::State& state) {
  const auto def = uniform(static_cast<int>(state.range(0)), gtb::Trigonometric{4, 1.5}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gtb::build_space(def));
}
BENCHMARK(BM_BuildUniformTrig)->Arg(16)->Arg(64);

void BM_EvalBasis(benchmark::State& state) {
  const auto space = gtb::build_space(mixed());
  const int order = static_cast<int>(state.range(0));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.eval_basis(x, order));
    x += 0.0137;
    if (x > 5.0) x = 0.0;
  }
}
BENCHMARK(BM_EvalBasis)->Arg(0)->Arg(2);

void BM_KnotInsertion(benchmark::State& state) {
  const auto space = gtb::build_space(mixed());
  for (auto _ : state) benchmark::DoNotOptimize(gtb::insert_knot(space, 3.7));
}
BENCHMARK(BM_KnotInsertion);

void BM_BasisIntegrals(benchmark::State& state) {
  const auto space = gtb::build_space(mixed());
  for (auto _ : state) benchmark::DoNotOptimize(gtb::basis_integrals(space));
}
BENCHMARK(BM_BasisIntegrals);

}  // namespace

BENCHMARK_MAIN();
