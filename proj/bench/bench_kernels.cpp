#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pmech/kernels.hpp"

using namespace pmech;

namespace {

grid::Grid2D random_gaussian_grid(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto ax = grid::Axis::centered(4.0, n);
  return grid::sample(ax, ax, [&](double x, double y) { return Complex(U(rng), U(rng)) * std::exp(-(x * x + y * y)); });
}

template <bool Parallel>
void BM_twisted_convolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_gaussian_grid(n, 1), b = random_gaussian_grid(n, 2);
  for (auto _ : state) {
    auto out = Parallel ? kernels::parallel::twisted_convolution(a, b, 2.0)
                        : kernels::reference::twisted_convolution(a, b, 2.0);
    benchmark::DoNotOptimize(out);
  }
}

template <bool Parallel>
void BM_kernel_action(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = random_gaussian_grid(16, 3);
  const auto ax = grid::Axis::centered(6.0, n);
  const auto f = grid::sample(ax, ax, [](double q, double p) { return Complex(std::exp(-(q * q + p * p)), 0.0); });
  for (auto _ : state) {
    auto out = Parallel ? kernels::parallel::kernel_action(1.0, k, f) : kernels::reference::kernel_action(1.0, k, f);
    benchmark::DoNotOptimize(out);
  }
}

template <bool Parallel>
void BM_leapfrog_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> q(n), p0(n, 0.0), p1(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i] = std::sin(0.01 * static_cast<double>(i));
  const kernels::LeapfrogParams prm{1e-4, 1e-3, 1.0, -1.0, {0.0, 1.0, 0.0, 1.0}};
  for (auto _ : state) {
    if (Parallel) kernels::parallel::leapfrog_step(q, p0, p1, prm);
    else kernels::reference::leapfrog_step(q, p0, p1, prm);
    benchmark::DoNotOptimize(q.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

template <bool Parallel>
void BM_dirac_pairing(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = clifford::make_metric({1, -1});
  kernels::Lattice lat{{n, n}, {0.01, 0.01}, {false, true}};
  std::vector<kernels::FieldMV> f;
  f.reserve(lat.sites());
  for (std::size_t s = 0; s < lat.sites(); ++s) {
    kernels::FieldMV v(m);
    v.set(0, std::cos(0.1 * static_cast<double>(s)));
    v.set(3, std::sin(0.2 * static_cast<double>(s)));
    f.push_back(std::move(v));
  }
  for (auto _ : state) {
    auto out = Parallel ? kernels::parallel::dirac_pairing(f, lat, m) : kernels::reference::dirac_pairing(f, lat, m);
    benchmark::DoNotOptimize(out);
  }
}

}  // namespace

BENCHMARK(BM_twisted_convolution<false>)->Name("twisted_convolution/reference")->Arg(16)->Arg(32);
BENCHMARK(BM_twisted_convolution<true>)->Name("twisted_convolution/parallel")->Arg(16)->Arg(32)->Arg(128);
BENCHMARK(BM_kernel_action<false>)->Name("kernel_action/reference")->Arg(64)->Arg(128);
BENCHMARK(BM_kernel_action<true>)->Name("kernel_action/parallel")->Arg(64)->Arg(128);
BENCHMARK(BM_leapfrog_step<false>)->Name("leapfrog_step/reference")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_leapfrog_step<true>)->Name("leapfrog_step/parallel")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_dirac_pairing<false>)->Name("dirac_pairing/reference")->Arg(64)->Arg(256);
BENCHMARK(BM_dirac_pairing<true>)->Name("dirac_pairing/parallel")->Arg(64)->Arg(256);

BENCHMARK_MAIN();
