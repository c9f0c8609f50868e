// Serial reference vs OpenMP kernels.

#include <memory>

#include <benchmark/benchmark.h>

#include "locsys/deform.hpp"
#include "locsys/repvar.hpp"

namespace {

using namespace locsys;

std::shared_ptr<const Presentation> commutator() {
  return std::make_shared<const Presentation>(
      std::vector<std::string>{"a", "b"},
      std::vector<Word>{parse_word("a b a^-1 b^-1", {"a", "b"})});
}

void BM_EnumerateSerial(benchmark::State& state) {
  const auto pres = commutator();
  const CoeffRing ring(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_reps_serial(pres, ring, 2));
}

void BM_EnumerateParallel(benchmark::State& state) {
  const auto pres = commutator();
  const CoeffRing ring(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_reps(pres, ring, 2));
}

Representation trivial_f2() {
  const auto pres = std::make_shared<const Presentation>(Presentation::free(2));
  const CoeffRing ring(3, 1);
  return {pres, ring, 2, {Matrix::identity(2), Matrix::identity(2)}};
}

void BM_LiftCountSerial(benchmark::State& state) {
  const auto rep = trivial_f2();
  for (auto _ : state) benchmark::DoNotOptimize(count_lifts_bruteforce_serial(rep, 1'000'000));
}

void BM_LiftCountParallel(benchmark::State& state) {
  const auto rep = trivial_f2();
  for (auto _ : state) benchmark::DoNotOptimize(count_lifts_bruteforce(rep, 1'000'000));
}

}  // namespace

BENCHMARK(BM_EnumerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LiftCountSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LiftCountParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
