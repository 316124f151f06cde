#include <benchmark/benchmark.h>

#include "borelmod/cases.hpp"
#include "borelmod/oracle.hpp"

using namespace borelmod;

namespace {

const char* kTypes[] = {"A2", "A3", "B2", "B3", "G2", "A4"};

void BM_run(benchmark::State& state) {
  const RootSystem rs(CartanType::parse(kTypes[state.range(0)]));
  const StructureConstants sc(rs);
  const ModuleWithFiltration mod(sc, state.range(1) ? Mode::Coadjoint : Mode::Adjoint);
  std::size_t cells = 0;
  for (auto _ : state) cells = run(mod, RunOptions{}).cells.size();
  state.SetLabel(std::string(kTypes[state.range(0)]) + (state.range(1) ? " coadjoint" : " adjoint"));
  state.counters["cells"] = static_cast<double>(cells);
}
BENCHMARK(BM_run)->ArgsProduct({{0, 1, 2, 3, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_brute_orbits(benchmark::State& state) {
  const RootSystem rs(CartanType::parse("B2"));
  const StructureConstants sc(rs);
  const ModuleWithFiltration mod(sc, Mode::Coadjoint);
  const auto p = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_orbits(mod, p));
}
BENCHMARK(BM_brute_orbits)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_structure_constants(benchmark::State& state) {
  const RootSystem rs(CartanType::parse("E8"));
  for (auto _ : state) benchmark::DoNotOptimize(StructureConstants(rs));
}
BENCHMARK(BM_structure_constants)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
