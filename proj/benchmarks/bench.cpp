#include <benchmark/benchmark.h>

#include "copath/generator.hpp"
#include "copath/oracle.hpp"
#include "copath/scoring.hpp"
#include "copath/smt_encoding.hpp"

namespace {

copath::Instance scaled(int graphs, int nodes, int resources) {
  copath::GeneratorSpec s;
  s.seed = 11;
  s.graph_count = graphs;
  s.nodes_per_graph = nodes;
  s.resource_count = resources;
  s.options_per_node = 3;
  s.interaction_density = 0.43;
  return copath::generate_synthetic(s);
}

void BM_EncodeFull(benchmark::State& state) {
  copath::Instance inst = scaled(5, static_cast<int>(state.range(0)), 127);
  for (auto _ : state) benchmark::DoNotOptimize(copath::encode_full(inst).text.size());
}
BENCHMARK(BM_EncodeFull)->Arg(4)->Arg(12)->Arg(24);

void BM_EncodeEquivalence(benchmark::State& state) {
  copath::Instance inst = scaled(5, static_cast<int>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(copath::encode_equivalence(inst.graphs).text.size());
}
BENCHMARK(BM_EncodeEquivalence)->Arg(12)->Arg(48);

void BM_Oracle(benchmark::State& state) {
  copath::Instance inst = scaled(2, static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(copath::oracle_solve(inst).optimum);
  state.counters["space"] = static_cast<double>(copath::oracle_space(inst));
}
BENCHMARK(BM_Oracle)->Arg(3)->Arg(5);

void BM_EvaluateObjective(benchmark::State& state) {
  copath::Instance small = scaled(2, 3, 6);
  copath::Assignment a = copath::oracle_solve(small).witness.assignment();
  for (auto _ : state) benchmark::DoNotOptimize(copath::evaluate_objective(small, a).objective);
}
BENCHMARK(BM_EvaluateObjective);

void BM_Generate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scaled(5, 12, 127).interactions.size());
}
BENCHMARK(BM_Generate);

}  // namespace

BENCHMARK_MAIN();
