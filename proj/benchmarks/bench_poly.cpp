#include <benchmark/benchmark.h>

#include "borelmod/poly.hpp"

using namespace borelmod;

namespace {

MultiPoly power_sum(int params, int degree) {
  MultiPoly s;
  for (int k = 1; k <= params; ++k) s += MultiPoly(Var::param(k)) * MultiPoly(Var::group(k));
  MultiPoly p = MultiPoly::parse("1");
  for (int d = 0; d < degree; ++d) p *= s;
  return p;
}

void BM_multiply(benchmark::State& state) {
  const MultiPoly a = power_sum(3, static_cast<int>(state.range(0)));
  const MultiPoly b = power_sum(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["terms"] = static_cast<double>(a.size());
}
BENCHMARK(BM_multiply)->DenseRange(1, 4);

void BM_substitute(benchmark::State& state) {
  const MultiPoly a = power_sum(3, static_cast<int>(state.range(0)));
  const MultiPoly v = MultiPoly::parse("a1*a2 - 2*a3");
  for (auto _ : state) benchmark::DoNotOptimize(a.substitute(Var::group(1), v));
}
BENCHMARK(BM_substitute)->DenseRange(1, 4);

void BM_divide_exact(benchmark::State& state) {
  const MultiPoly b = MultiPoly::parse("a1 - a2 + t3");
  const MultiPoly a = power_sum(3, static_cast<int>(state.range(0))) * b;
  for (auto _ : state) benchmark::DoNotOptimize(a.divide_exact(b));
}
BENCHMARK(BM_divide_exact)->DenseRange(1, 3);

void BM_parse(benchmark::State& state) {
  const std::string text = power_sum(3, 3).to_string();
  for (auto _ : state) benchmark::DoNotOptimize(MultiPoly::parse(text));
}
BENCHMARK(BM_parse);

}  // namespace
