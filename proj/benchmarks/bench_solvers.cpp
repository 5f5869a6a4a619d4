// SPDX-License-Identifier: Apache-2.0
#include "crdra/bc.hpp"
#include "crdra/dra.hpp"
#include "crdra/ic.hpp"
#include "crdra/mac.hpp"
#include "crdra/p2p.hpp"
#include "crdra/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace crdra;

namespace {

FadingProcess seeded(std::uint64_t seed, std::size_t dims = 1) {
  FadingProcess f;
  f.seed = seed;
  f.dimensions = dims;
  return f;
}

void BM_Capacity(benchmark::State& state) {
  const Index n = state.range(0);
  const NetworkInstance inst = generate_instance(Topology::point_to_point(n, n, {1, 1}), seeded(1));
  const CapacityProblem p = CapacityProblem::from_instance(inst, 10.0, {0.1, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(solve_capacity(p).objective);
}
BENCHMARK(BM_Capacity)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PartialProjection(benchmark::State& state) {
  const NetworkInstance inst = generate_instance(Topology::point_to_point(4, 4, {1, 1}), seeded(2));
  const CapacityProblem p = CapacityProblem::from_instance(inst, 10.0, {0.1, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(partial_projection(p, 1).objective);
}
BENCHMARK(BM_PartialProjection)->Unit(benchmark::kMillisecond);

void BM_MacWsr(benchmark::State& state) {
  const auto users = static_cast<std::size_t>(state.range(0));
  NetworkInstance inst = generate_instance(Topology::mac(4, std::vector<Index>(users, 2), {1}), seeded(3));
  MacProblem p = MacProblem::from_instance(inst, std::vector<double>(users, 2.0), {0.5});
  for (auto _ : state) benchmark::DoNotOptimize(solve_mac_wsr(p).objective);
}
BENCHMARK(BM_MacWsr)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BcWsr(benchmark::State& state) {
  const NetworkInstance inst = generate_instance(Topology::bc(4, {2, 2}, {1}), seeded(4));
  const BcProblem p = BcProblem::from_instance(inst, 2.0, {0.5});
  for (auto _ : state) benchmark::DoNotOptimize(solve_bc_wsr(p).objective);
}
BENCHMARK(BM_BcWsr)->Unit(benchmark::kMillisecond);

void BM_SinrBalancing(benchmark::State& state) {
  const auto users = static_cast<std::size_t>(state.range(0));
  const NetworkInstance inst = generate_instance(Topology::bc(4, std::vector<Index>(users, 1), {1}), seeded(5));
  const MisoBcProblem p = MisoBcProblem::from_instance(inst, 2.0, {0.2});
  for (auto _ : state) benchmark::DoNotOptimize(solve_sinr_balancing(p).alpha_star);
}
BENCHMARK(BM_SinrBalancing)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_IcWsr(benchmark::State& state) {
  const NetworkInstance inst = generate_instance(Topology::ic({2, 2, 2}, {2, 2, 2}, {1}), seeded(6));
  const IcProblem p = IcProblem::from_instance(inst, {1.0, 1.0, 1.0}, {0.3});
  const PipcSplit split = PipcSplit::equal(p.interference, 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_ic_wsr(p, split).report.objective);
}
BENCHMARK(BM_IcWsr)->Unit(benchmark::kMillisecond);

void BM_Dra(benchmark::State& state) {
  const auto dims = static_cast<std::size_t>(state.range(0));
  const auto utility = state.range(1) == 0 ? DraUtility::MacWsr : DraUtility::TdmaSumRate;
  const FadingScenario s = FadingScenario::generate(Topology::mac(1, {1, 1}, {}), seeded(7, dims), {1.0, 1.0}, {});
  for (auto _ : state) benchmark::DoNotOptimize(solve_dra(s, utility).report.objective);
}
BENCHMARK(BM_Dra)->Args({100, 0})->Args({100, 1})->Args({1000, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
