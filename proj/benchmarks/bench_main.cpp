#include <benchmark/benchmark.h>

#include "cbforms/forms.hpp"
#include "cbforms/freecomb.hpp"
#include "cbforms/matnum.hpp"
#include "cbforms/ncpoly.hpp"
#include "cbforms/quantum.hpp"
#include "cbforms/simulate.hpp"
#include "cbforms/witness.hpp"

using namespace cbforms;

static void BM_HaarUnitary(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(matnum::haar_unitary(N, Seed(1).child(k++)));
}
BENCHMARK(BM_HaarUnitary)->RangeMultiplier(4)->Range(16, 256);

static void BM_Polar(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const matnum::Matrix M = matnum::haar_unitary(N, Seed(2)) + matnum::haar_unitary(N, Seed(3));
  const auto method = state.range(1) == 0 ? matnum::PolarMethod::kSvd : matnum::PolarMethod::kNewtonSchulz;
  for (auto _ : state) benchmark::DoNotOptimize(matnum::polar(M, matnum::PolarSide::kLeft, method));
}
BENCHMARK(BM_Polar)->ArgsProduct({{32, 128}, {0, 1}});

static void BM_OperatorNorm(benchmark::State& state) {
  const matnum::Matrix M = matnum::haar_unitary(256, Seed(4)) + 0.5 * matnum::haar_unitary(256, Seed(5));
  const auto method = static_cast<matnum::NormMethod>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(matnum::operator_norm(M, method));
}
BENCHMARK(BM_OperatorNorm)->DenseRange(0, 2);

static void BM_EvaluateNc(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto f = forms::random_form(3, 3, 12, true, Seed(6));
  const auto p = ncpoly::to_nc(f);
  ncpoly::NCAssignment A{N, {}};
  for (int k = 0; k < p.num_variables(); ++k) A.values.push_back(matnum::haar_unitary(N, Seed(7).child(k)));
  for (auto _ : state) benchmark::DoNotOptimize(ncpoly::evaluate_nc(p, A));
}
BENCHMARK(BM_EvaluateNc)->Arg(32)->Arg(128);

static void BM_RootInfluenceWitness(benchmark::State& state) {
  const auto f = forms::random_form(2, 4, 8, true, Seed(8));
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(witness::root_influence_witness(f, witness::Side::kFirst, {N}, Seed(9)));
}
BENCHMARK(BM_RootInfluenceWitness)->Arg(64)->Arg(256);

static void BM_CountPairings(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(freecomb::count_star_pairings(d, m));
}
BENCHMARK(BM_CountPairings)->Args({1, 6})->Args({2, 4})->Args({3, 4});

static void BM_TraceMoment(benchmark::State& state) {
  ncpoly::NCPolynomial p(3);
  p.add_term({0, 1}, 1.0);
  p.add_term({1, 2}, -2.0);
  p.add_term({2, 0}, 3.0);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(freecomb::trace_moment_exact(p, m));
}
BENCHMARK(BM_TraceMoment)->DenseRange(1, 3);

static void BM_ExtractForm(benchmark::State& state) {
  const auto c = quantum::gen_random_circuit(4, 2, 3, Seed(10));
  const auto method = state.range(0) == 0 ? quantum::ExtractionMethod::kAlgebraic : quantum::ExtractionMethod::kFourier;
  for (auto _ : state) benchmark::DoNotOptimize(quantum::extract_form(c, method));
}
BENCHMARK(BM_ExtractForm)->Arg(0)->Arg(1);

static void BM_ErrorProfile(benchmark::State& state) {
  const auto f = quantum::extract_form(quantum::gen_forrelation_circuit(4));
  const auto policy = simulate::SimulationPolicy::chebyshev(0.25, 0.25, 16);
  for (auto _ : state) benchmark::DoNotOptimize(simulate::error_profile(f, policy));
}
BENCHMARK(BM_ErrorProfile);
BENCHMARK_MAIN();
