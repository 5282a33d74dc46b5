// Serial enumeration vs the OpenMP kernel vs variable elimination on a
// layered graph with `n` ternary variables.

#include <benchmark/benchmark.h>

#include "stateid/constraints.hpp"
#include "stateid/inference.hpp"

namespace {

stateid::Cbn layered(std::size_t n) {
  std::vector<stateid::Variable> vars;
  std::vector<stateid::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    vars.push_back(stateid::numbered_variable("V" + std::to_string(i), 3, i % 4 != 0));
    if (i >= 1) edges.push_back({vars[i - 1].name, vars[i].name});
    if (i >= 3) edges.push_back({vars[i - 3].name, vars[i].name});
  }
  stateid::CausalGraph g(std::move(vars), std::move(edges));
  return stateid::sample_constrained(g, {}, 1, {.check_positivity = false});
}

void BM_JointSerial(benchmark::State& st) {
  auto m = layered(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(stateid::joint_reference(m));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(m.graph().state_space(1u << 30)));
}

void BM_JointParallel(benchmark::State& st) {
  auto m = layered(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(stateid::joint(m));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(m.graph().state_space(1u << 30)));
}

void BM_ObservedMarginalVe(benchmark::State& st) {
  auto m = layered(static_cast<std::size_t>(st.range(0)));
  const auto last = m.graph().variable(m.graph().size() - 1).name;
  for (auto _ : st) benchmark::DoNotOptimize(stateid::eliminate_ve(m, {last}));
}

void BM_ObservedMarginalEnum(benchmark::State& st) {
  auto m = layered(static_cast<std::size_t>(st.range(0)));
  const auto last = m.graph().variable(m.graph().size() - 1).name;
  for (auto _ : st) benchmark::DoNotOptimize(stateid::marginal(m, {last}));
}

}  // namespace

BENCHMARK(BM_JointSerial)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JointParallel)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ObservedMarginalEnum)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ObservedMarginalVe)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
