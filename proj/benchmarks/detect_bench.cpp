#include <benchmark/benchmark.h>

#include "harness.hpp"
#include "refaware/detector.hpp"

namespace {

void BM_DetectScriptedCorpus(benchmark::State& state) {
  auto corpus = refaware::testing::ScriptGenerator(7).refactorings(static_cast<int>(state.range(0)));
  auto merged = refaware::testing::merge(corpus);
  auto changes = refaware::testing::to_changes(merged);
  for (auto _ : state) benchmark::DoNotOptimize(refaware::detect(changes, refaware::DetectorConfig{}));
  state.counters["files"] = static_cast<double>(changes.size());
}
BENCHMARK(BM_DetectScriptedCorpus)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
