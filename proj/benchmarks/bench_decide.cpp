#include "twpa/constructions.hpp"
#include "twpa/crossing.hpp"
#include "twpa/decide.hpp"
#include "twpa/parikh.hpp"
#include "twpa/presburger/formula.hpp"
#include "twpa/presburger/linear.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace twpa;

namespace {

void BM_ToOneWay(benchmark::State& state) {
  Automaton sweep = build_sweep();
  const auto k = static_cast<std::size_t>(state.range(0));
  std::size_t sections = 0;
  for (auto _ : state) {
    auto conv = to_one_way(sweep, k);
    sections = conv.sections.size();
    benchmark::DoNotOptimize(conv);
  }
  state.counters["sections"] = static_cast<double>(sections);
}
BENCHMARK(BM_ToOneWay)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

void BM_EmptinessSweep(benchmark::State& state) {
  Automaton sweep = build_sweep();
  // at least n letters a
  auto n = static_cast<int>(state.range(0));
  sweep.set_constraint(presburger::Formula::conj(
      sweep.constraint(), presburger::Formula::le(presburger::LinearExpr(n),
                                                  presburger::LinearExpr::variable(presburger::dim_var(1)))));
  for (auto _ : state) benchmark::DoNotOptimize(is_empty(sweep, 3));
}
BENCHMARK(BM_EmptinessSweep)->Arg(0)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LengthFormula(benchmark::State& state) {
  auto conv = to_one_way_emptiness(build_sweep(), 3);
  auto ell = presburger::named_var("l");
  for (auto _ : state) benchmark::DoNotOptimize(length_formula(conv.automaton, ell));
}
BENCHMARK(BM_LengthFormula)->Unit(benchmark::kMicrosecond);

void BM_MembershipMultiplication(benchmark::State& state) {
  Automaton mult = build_multiplication();
  const auto n = static_cast<std::size_t>(state.range(0));
  Word w = parse_word(mult, std::string(n, 'a') + "#" + std::string(n, 'a') + "#" + std::string(n * n, 'a'));
  for (auto _ : state) benchmark::DoNotOptimize(membership(mult, w));
}
BENCHMARK(BM_MembershipMultiplication)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Complement(benchmark::State& state) {
  Automaton sweep = build_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(complement(sweep));
}
BENCHMARK(BM_Complement)->Unit(benchmark::kMicrosecond);

void BM_Equivalent(benchmark::State& state) {
  Automaton sweep = build_sweep();
  for (auto _ : state) benchmark::DoNotOptimize(equivalent(sweep, sweep));
}
BENCHMARK(BM_Equivalent)->Unit(benchmark::kMillisecond);

}  // namespace
