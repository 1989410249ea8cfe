#include "twpa/presburger/qe.hpp"
#include "twpa/presburger/solver.hpp"
#include "twpa/presburger/syntax.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace twpa::presburger;

namespace {

void BM_CooperSentence(benchmark::State& state) {
  Formula f = parse_formula("forall x. exists y. x = 2*(y) \\/ x = 2*(y) + 1");
  for (auto _ : state) benchmark::DoNotOptimize(eliminate_all(f));
}
BENCHMARK(BM_CooperSentence)->Unit(benchmark::kMicrosecond);

// Chinese remainder: x mod p_i = 1 for the first n odd primes.
void BM_Congruences(benchmark::State& state) {
  const int primes[] = {3, 5, 7, 11, 13};
  std::string text = "exists x. 0 <= x";
  for (int i = 0; i < state.range(0); ++i) text += " /\\ " + std::to_string(primes[i]) + " | x + " + std::to_string(primes[i] - 1);
  Formula f = parse_formula(text);
  for (auto _ : state) benchmark::DoNotOptimize(is_satisfiable(f));
}
BENCHMARK(BM_Congruences)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

void BM_LinearSystem(benchmark::State& state) {
  Formula f = parse_formula("3*x + 5*y = 7*z + 1 /\\ 0 <= x /\\ 0 <= y /\\ 0 <= z /\\ x + y + z <= 40 /\\ 4 | x + y");
  for (auto _ : state) benchmark::DoNotOptimize(find_model(f));
}
BENCHMARK(BM_LinearSystem)->Unit(benchmark::kMicrosecond);

}  // namespace
