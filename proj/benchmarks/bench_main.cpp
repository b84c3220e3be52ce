#include <benchmark/benchmark.h>

#include <tctv/gradient.hpp>
#include <tctv/rng.hpp>
#include <tctv/solver.hpp>
#include <tctv/synthesis.hpp>
#include <tctv/tsvd.hpp>

namespace {

using namespace tctv;

DenseTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> data(static_cast<std::size_t>(shape.size()));
  for (auto& x : data) x = gauss(rng);
  return DenseTensor::from_real(shape, std::move(data));
}

Shape bench_shape(std::int64_t n) { return Shape({n, n, 8, 8}); }

void BM_Forward(benchmark::State& state, TransformKind kind) {
  const Shape sh = bench_shape(state.range(0));
  const auto spec = TransformSpec::make(kind, sh.trailing_dims(), 3);
  const auto t = random_tensor(sh, 1);
  for (auto _ : state) {
    auto f = forward(t, spec);
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(state.iterations() * sh.size());
}
BENCHMARK_CAPTURE(BM_Forward, dft, TransformKind::Dft)->Arg(20)->Arg(40);
BENCHMARK_CAPTURE(BM_Forward, dct, TransformKind::Dct)->Arg(20)->Arg(40);

void BM_Tsvt(benchmark::State& state, TransformKind kind) {
  const Shape sh = bench_shape(state.range(0));
  const auto spec = TransformSpec::make(kind, sh.trailing_dims(), 3);
  const auto t = random_tensor(sh, 1);
  const double tau = 0.2 * singular_tube_sup(t, spec)[0];
  for (auto _ : state) {
    auto x = tsvt(t, tau, spec);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK_CAPTURE(BM_Tsvt, dft, TransformKind::Dft)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tsvt, dct, TransformKind::Dct)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_TProduct(benchmark::State& state) {
  const Shape sh = bench_shape(state.range(0));
  const auto spec = TransformSpec::make(TransformKind::Dft, sh.trailing_dims());
  const auto a = random_tensor(sh, 1);
  const auto b = random_tensor(sh, 2);
  for (auto _ : state) {
    auto c = t_product(a, b, spec);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_TProduct)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_LaplacianSolve(benchmark::State& state) {
  const Shape sh = bench_shape(state.range(0));
  const auto gamma = SmoothnessSet::make({0, 1}, 4);
  const auto eig = make_diff_eigenvalues(sh, gamma);
  const auto rhs = random_tensor(sh, 1);
  for (auto _ : state) {
    auto x = solve_identity_plus_laplacian(rhs, eig);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_LaplacianSolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CompletionIteration(benchmark::State& state) {
  // One full solve with a small iteration cap: amortized per-iteration cost.
  const Shape sh = bench_shape(state.range(0));
  SynthSpec synth;
  synth.dims = sh;
  synth.rank = 3;
  synth.regions = 10;
  synth.transform = {TransformKind::Dft, 0};
  synth.seed = 5;
  const auto truth = gen_lowrank_smooth(synth);
  const auto mask = gen_mask(sh, 0.5, 7);
  const auto observed = project(truth, mask);
  AdmmConfig cfg;
  cfg.transform = synth.transform;
  cfg.gamma_modes = {0, 1};
  cfg.max_iters = 20;
  cfg.compute_incoherence = false;
  for (auto _ : state) {
    auto rep = complete_tctv(observed, mask, cfg, nullptr);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_CompletionIteration)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
