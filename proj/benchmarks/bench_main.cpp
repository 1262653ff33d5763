#include <benchmark/benchmark.h>

#include "loopframe/frame_sde.hpp"
#include "loopframe/loop_sampler.hpp"
#include "loopframe/nls_flow.hpp"
#include "loopframe/partition_kernel.hpp"
#include "loopframe/rng.hpp"
#include "loopframe/transport_stats.hpp"

#include <cmath>
#include <vector>

using namespace loopframe;

namespace {

void BM_gem_step(benchmark::State& state) {
  rng::Gaussian g(1, 0);
  frame_sde::Mat3 X = frame_sde::Mat3::Identity();
  const double h = 1e-3, sqh = std::sqrt(h);
  for (auto _ : state) {
    auto k = frame_sde::coefficient_matrices(g(), g(), 1e-2);
    X = frame_sde::gem_step(X, k, sqh * g(), sqh * g(), h, 0.01, -0.02);
    benchmark::DoNotOptimize(X);
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_split_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  rng::Gaussian g(2, 0);
  auto state0 = nls_flow::from_loop(loop_sampler::sample_wiener_loop(n, g), 1.0);
  for (auto _ : state) {
    auto s = state0;
    nls_flow::evolve(s, 1e-3, 8, [](const nls_flow::NlsState&) {});
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * 8);
}

void BM_sample_wiener_loop(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  rng::Gaussian g(3, 0);
  for (auto _ : state) {
    auto s = loop_sampler::sample_wiener_loop(n, g);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_loop_invariants(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  rng::Gaussian g(4, 0);
  auto s = loop_sampler::sample_wiener_loop(n, g);
  for (auto _ : state) {
    auto inv = loop_sampler::invariants(s, 1.0);
    benchmark::DoNotOptimize(inv);
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_w1_empirical_analytic(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  rng::Gaussian g(5, 0);
  auto F = transport_stats::longitude_reference();
  std::vector<double> xs(static_cast<size_t>(N));
  for (auto& x : xs) x = F.quantile(g.uniform());
  transport_stats::EmpiricalCdf cdf(xs);
  for (auto _ : state) {
    double w = transport_stats::w1_cdf(cdf, F);
    benchmark::DoNotOptimize(w);
  }
  state.SetItemsProcessed(state.iterations() * N);
}

void BM_assemble_jk(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const std::vector<double> alphas = {1.0, 0.5, 0.25, 0.125};
  for (auto _ : state) {
    auto terms = partition_kernel::assemble_jk(k, alphas);
    benchmark::DoNotOptimize(terms);
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_frame_path(benchmark::State& state) {
  frame_sde::FrameConfig fc;
  fc.epsilon = 1e-2;
  fc.h = 1e-3;
  fc.T = 1.0;
  fc.seed = 6;
  std::uint64_t id = 0;
  for (auto _ : state) {
    auto p = frame_sde::simulate_frame_path(fc, id++);
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}

BENCHMARK(BM_gem_step);
BENCHMARK(BM_split_step)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_sample_wiener_loop)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_loop_invariants)->Arg(64)->Arg(256);
BENCHMARK(BM_w1_empirical_analytic)->Arg(1000)->Arg(10000);
BENCHMARK(BM_assemble_jk)->Arg(3)->Arg(5)->Arg(6);
BENCHMARK(BM_frame_path);

}  // namespace

BENCHMARK_MAIN();
