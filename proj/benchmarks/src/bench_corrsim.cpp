// Microbenchmarks for the numerical hot paths: tensor algebra, the two
// entropy-exchange routes, typicality projectors, and the block construction.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "corrsim/channels.hpp"
#include "corrsim/linalg.hpp"
#include "corrsim/protocols.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/states.hpp"
#include "corrsim/typicality.hpp"

namespace {

using namespace corrsim;

DensityMatrix qubit_pair_state(std::uint64_t seed) {
  RngStream rng(seed);
  return random_induced_mixed({2, 2}, 0, rng);
}

MixedUnitaryChannel random_general(int n_elements, std::uint64_t seed) {
  RngStream rng(seed);
  const RealVector probs = random_simplex_point(n_elements, rng);
  std::vector<double> p(probs.data(), probs.data() + n_elements);
  std::vector<ComplexMatrix> us;
  us.reserve(n_elements);
  for (int i = 0; i < n_elements; ++i) us.push_back(random_unitary(4, rng));
  return MixedUnitaryChannel::general(p, us, 2, 2);
}

void BM_TensorProduct(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(1);
  const ComplexMatrix a = random_unitary(d, rng);
  const ComplexMatrix b = random_unitary(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(tensor(a, b));
  state.SetComplexityN(d);
}
BENCHMARK(BM_TensorProduct)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_PartialTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(2);
  const DensityMatrix rho = random_induced_mixed({d, d}, 0, rng);
  const DimList dims{{d, d}};
  const std::vector<int> keep{0};
  for (auto _ : state)
    benchmark::DoNotOptimize(partial_trace(rho.matrix(), dims, keep));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

// Validation diagonalizes once and caches the spectrum, so this measures
// construction plus the entropy read together.
void BM_StateValidationAndEntropy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(3);
  const DensityMatrix rho = random_induced_mixed({d}, 0, rng);
  for (auto _ : state) {
    const DensityMatrix fresh(rho.matrix(), rho.dims());
    benchmark::DoNotOptimize(von_neumann_entropy(fresh));
  }
}
BENCHMARK(BM_StateValidationAndEntropy)->Arg(4)->Arg(16)->Arg(64);

void BM_ChannelApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto channel = random_general(n, 4);
  const DensityMatrix rho = qubit_pair_state(5);
  for (auto _ : state) benchmark::DoNotOptimize(channel.apply(rho));
}
BENCHMARK(BM_ChannelApply)->Arg(2)->Arg(8)->Arg(32);

void BM_EntropyExchangeGram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto channel = random_general(n, 6);
  const DensityMatrix rho = qubit_pair_state(7);
  for (auto _ : state)
    benchmark::DoNotOptimize(entropy_exchange(channel, rho));
}
BENCHMARK(BM_EntropyExchangeGram)->Arg(2)->Arg(8)->Arg(32);

void BM_EntropyExchangePurification(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto channel = random_general(n, 6);
  const DensityMatrix rho = qubit_pair_state(7);
  for (auto _ : state)
    benchmark::DoNotOptimize(entropy_exchange_via_purification(channel, rho));
}
BENCHMARK(BM_EntropyExchangePurification)->Arg(2)->Arg(8)->Arg(32);

void BM_TypicalProjectorDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = make_state("diag:0.9,0.1");
  for (auto _ : state) {
    const TypicalProjector tp = typical_projector(rho, n, 0.2);
    benchmark::DoNotOptimize(typicality_report(tp, rho, n, 0.2));
  }
}
BENCHMARK(BM_TypicalProjectorDense)->Arg(4)->Arg(8)->Arg(10);

void BM_TypicalityCounting(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = make_state("diag:0.9,0.1");
  for (auto _ : state)
    benchmark::DoNotOptimize(typicality_report_counting(rho, n, 0.2));
}
BENCHMARK(BM_TypicalityCounting)->Arg(50)->Arg(200)->Arg(800);

void BM_BlockDecorrelation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = bell_dephased();
  for (auto _ : state)
    benchmark::DoNotOptimize(decorrelate_prop2(rho, n, 0.1, 16, 1));
}
BENCHMARK(BM_BlockDecorrelation)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SchmidtDephasing(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream rng(8);
  const PureState psi = random_haar_pure({d, d}, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(disentangle_pure(psi, {0}));
}
BENCHMARK(BM_SchmidtDephasing)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
