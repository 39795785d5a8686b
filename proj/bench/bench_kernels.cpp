// Serial reference kernels against their OpenMP counterparts.

#include "hcol/cycle_census.hpp"
#include "hcol/exact_count.hpp"
#include "hcol/generators.hpp"
#include "hcol/w_distribution.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>

using namespace hcol;

namespace {

Component largest_component(std::uint32_t n, std::uint64_t m) {
  const auto comps = split_components(gen_hnm(ModelParams::from_edges(n, m, 3), 1));
  return *std::max_element(comps.begin(), comps.end(),
                           [](const Component& a, const Component& b) { return a.vertices.size() < b.vertices.size(); });
}

template <auto Kernel>
void enumerate(benchmark::State& state) {
  const Component c = largest_component(static_cast<std::uint32_t>(state.range(0)), state.range(0) * 2 / 3);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(c));
  state.counters["vertices"] = static_cast<double>(c.vertices.size());
}

template <auto Kernel>
void walks(benchmark::State& state) {
  const Hypergraph h = gen_hnm(ModelParams::from_density(static_cast<std::uint32_t>(state.range(0)), 2.0, 3), 1);
  const Incidence inc(h);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(h, inc, 5));
}

void w_samples(benchmark::State& state) {
  const WConfig cfg = make_w_config(ModelParams::from_edges(300, 200, 3), 30u);
  for (auto _ : state) benchmark::DoNotOptimize(w_ecdf(cfg, 100'000, 1, state.range(0) != 0));
}

}  // namespace

BENCHMARK(enumerate<kernels::enumerate_component_serial>)->Name("enumerate_component/serial")->Arg(24)->Arg(28);
BENCHMARK(enumerate<kernels::enumerate_component_parallel>)->Name("enumerate_component/parallel")->Arg(24)->Arg(28);
BENCHMARK(walks<kernels::min_rooted_walks_serial>)->Name("min_rooted_walks/serial")->Arg(3000)->Arg(30000);
BENCHMARK(walks<kernels::min_rooted_walks_parallel>)->Name("min_rooted_walks/parallel")->Arg(3000)->Arg(30000);
BENCHMARK(w_samples)->Name("w_ecdf/serial")->Arg(0);
BENCHMARK(w_samples)->Name("w_ecdf/parallel")->Arg(1);

BENCHMARK_MAIN();
