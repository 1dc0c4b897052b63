// Parallel closure kernel vs. the serial pair-by-pair reference.

#include <benchmark/benchmark.h>

#include "cartankit/odd_even.hpp"
#include "cartankit/subspace.hpp"

namespace {

using namespace cartankit;

OddEvenDecomposition fixture(int which) {
  switch (which) {
    case 0: return ccd(3);
    case 1: return build_odd_even(std::vector<SubsystemChoice>{{4, CartanFamily::AII, {}},
                                                               {3, CartanFamily::AI, {}}});
    default: return ccd(4);
  }
}

void BM_ClosureParallel(benchmark::State& state) {
  const OddEvenDecomposition d = fixture(static_cast<int>(state.range(0)));
  const MatrixSubspace i_odd = d.odd.times_i();
  for (auto _ : state) {
    benchmark::DoNotOptimize(closure_check(i_odd, i_odd, i_odd, BracketKind::Commutator));
  }
  state.SetLabel("n=" + std::to_string(d.total_dim));
}

void BM_ClosureReference(benchmark::State& state) {
  const OddEvenDecomposition d = fixture(static_cast<int>(state.range(0)));
  const MatrixSubspace i_odd = d.odd.times_i();
  for (auto _ : state) {
    benchmark::DoNotOptimize(closure_check_reference(i_odd, i_odd, i_odd, BracketKind::Commutator));
  }
  state.SetLabel("n=" + std::to_string(d.total_dim));
}

}  // namespace

BENCHMARK(BM_ClosureParallel)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosureReference)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
