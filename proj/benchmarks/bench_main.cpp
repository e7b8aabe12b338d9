// SPDX-License-Identifier: MIT
#include <benchmark/benchmark.h>

#include <cmath>

#include "rstab/calculus.hpp"
#include "rstab/curvalg.hpp"
#include "rstab/stability.hpp"
#include "rstab/surface.hpp"

namespace {

using namespace rstab;

surface::SurfaceGeometry bent_sphere_graph(int res0, int res1) {
  const auto model = spacetime::make_de_sitter(2);
  const auto grid = surface::build_fiber_grid(model, res0, res1);
  Field u(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j)
      u[grid.idx(i, j)] = std::log(2.0) + 0.1 * std::cos(2.0 * grid.c0[i]) +
                          0.05 * std::sin(grid.c0[i]) * std::cos(grid.c1[j]);
  return surface::embed_graph(model, grid, surface::GraphFunction{u});
}

void bm_newton_seq(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sample = curvalg::ShapeSample::random(n, 1234 + n);
  for (auto _ : state) {
    auto seq = curvalg::newton_seq(sample);
    benchmark::DoNotOptimize(seq.P.back()(0, 0));
  }
}
BENCHMARK(bm_newton_seq)->Arg(2)->Arg(4)->Arg(6);

void bm_embed_graph(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const auto model = spacetime::make_de_sitter(2);
  const auto grid = surface::build_fiber_grid(model, res, 2 * res);
  Field u(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j)
      u[grid.idx(i, j)] = std::log(2.0) + 0.1 * std::cos(2.0 * grid.c0[i]);
  for (auto _ : state) {
    auto geom = surface::embed_graph(model, grid, surface::GraphFunction{u});
    benchmark::DoNotOptimize(geom.area);
  }
  state.SetItemsProcessed(state.iterations() * grid.nodes());
}
BENCHMARK(bm_embed_graph)->Arg(16)->Arg(32)->Arg(64);

void bm_lr_divergence_form(benchmark::State& state) {
  const auto geom = bent_sphere_graph(32, 64);
  Field f(geom.grid.nodes());
  for (int i = 0; i < geom.grid.n0; ++i)
    for (int j = 0; j < geom.grid.n1; ++j)
      f[geom.grid.idx(i, j)] =
          std::sin(geom.grid.c0[i]) * std::cos(geom.grid.c1[j]);
  for (auto _ : state) {
    auto lf = calculus::lr_divergence_form(geom, 1, f);
    benchmark::DoNotOptimize(lf[0]);
  }
  state.SetItemsProcessed(state.iterations() * geom.grid.nodes());
}
BENCHMARK(bm_lr_divergence_form);

void bm_stability_form(benchmark::State& state) {
  const auto geom = bent_sphere_graph(32, 64);
  for (auto _ : state) {
    auto form = stability::stability_form(geom, 1);
    benchmark::DoNotOptimize(form.q.coeff(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * geom.grid.nodes());
}
BENCHMARK(bm_stability_form);

void bm_stability_evaluate(benchmark::State& state) {
  const auto geom = bent_sphere_graph(32, 64);
  const auto form = stability::stability_form(geom, 1);
  Field f(geom.grid.nodes(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stability::evaluate(form, f));
  }
}
BENCHMARK(bm_stability_evaluate);

}  // namespace

BENCHMARK_MAIN();
