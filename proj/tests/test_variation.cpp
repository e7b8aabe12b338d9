// SPDX-License-Identifier: MIT
#include <cmath>
#include <numbers>

#include <doctest.h>
#include "rstab/calculus.hpp"
#include "rstab/variation.hpp"

using namespace rstab;
using surface::build_fiber_grid;
using surface::embed_graph;
using surface::GraphFunction;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLn2 = std::log(2.0);

surface::SurfaceGeometry de_sitter_slice(int res0, int res1, double s0) {
  auto model = spacetime::make_de_sitter(2);
  auto grid = build_fiber_grid(model, res0, res1);
  return embed_graph(model, grid, GraphFunction{Field(grid.nodes(), s0)});
}

Field ones(const surface::SurfaceGeometry& geom) { return Field(geom.node.size(), 1.0); }

// Antipodally odd scalar on the sphere grid: cos(theta).
Field polar_cosine(const surface::FiberGrid& grid) {
  Field f(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j) f[grid.idx(i, j)] = std::cos(grid.c0[i]);
  return f;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = static_cast<double>(h.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("variation") {

TEST_CASE("cr ladder") {
  CHECK(variation::cr_constant(2, 0, 1.0) == 0.0);
  CHECK(variation::cr_constant(3, 1, 1.0) == doctest::Approx(3.0));
  CHECK(variation::cr_constant(4, 1, 1.0) == doctest::Approx(4.0));
  CHECK(variation::cr_constant(4, 3, 1.0) == doctest::Approx(-4.0));
  CHECK(variation::cr_constant(5, 2, 3.0) == 0.0);
  CHECK(variation::cr_constant(6, 4, 2.0) == 0.0);
  CHECK(variation::cr_constant(5, 5, 2.0) ==
        doctest::Approx(-2.0 * 1.0 / 4.0 * variation::cr_constant(5, 3, 2.0)));
  CHECK_THROWS_AS((void)variation::cr_constant(3, -1, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)variation::cr_constant(3, 4, 1.0), std::domain_error);
}

TEST_CASE("r-area of the log-2 slice") {
  auto geom = de_sitter_slice(32, 64, kLn2);
  // F_0 = 1 integrates to the area, F_1 = -S_1 = 1.2 on this slice.
  CHECK(variation::r_area(geom, 0) == doctest::Approx(6.25 * kPi).epsilon(2e-3));
  CHECK(variation::r_area(geom, 1) == doctest::Approx(7.5 * kPi).epsilon(2e-3));
  CHECK_THROWS_AS((void)variation::r_area(geom, 2), std::domain_error);
}

TEST_CASE("first variation of the slice, unit speed") {
  auto geom = de_sitter_slice(32, 64, kLn2);
  auto spec = variation::make_variation(geom, ones(geom), 0.01);
  for (double w : spec.w) CHECK(w == doctest::Approx(1.0).epsilon(1e-12));

  const double h2 = geom.grid.h() * geom.grid.h();
  SUBCASE("r = 0: area rate 7.5 pi") {
    auto rep = variation::first_variation_check(spec, 0);
    CHECK(rep.fd == doctest::Approx(7.5 * kPi).epsilon(2e-3));
    CHECK(rep.formula == doctest::Approx(7.5 * kPi).epsilon(2e-3));
    // fd differentiates the discrete functional exactly; the gap to the
    // closed form is the uniform O(h^2) bias of the discrete curvature.
    CHECK(rep.residual < h2 * (1.0 + std::abs(rep.fd)));
    CHECK(std::abs(rep.fd_coarse - rep.fd) < 1e-2);
    CHECK(rep.balance_residual < 1e-6);
  }
  SUBCASE("r = 1: rate 17 pi") {
    auto rep = variation::first_variation_check(spec, 1);
    CHECK(rep.fd == doctest::Approx(17.0 * kPi).epsilon(2e-3));
    CHECK(rep.formula == doctest::Approx(17.0 * kPi).epsilon(2e-3));
    CHECK(rep.residual < h2 * (1.0 + std::abs(rep.fd)));
  }
}

TEST_CASE("evolution law on the slice pins the rate of S_1") {
  auto geom = de_sitter_slice(32, 64, kLn2);
  auto spec = variation::make_variation(geom, ones(geom), 0.01);
  // Analytic rate: d/dt [-2 tanh(ln 2 + t)] = -2 sech^2(ln 2) = -1.28.
  auto minus = variation::evolve(spec, -0.01), plus = variation::evolve(spec, 0.01);
  double worst = 0.0;
  for (std::size_t k = 0; k < spec.u.size(); ++k) {
    const double rate =
        (plus.geom.node[k].pack.S[1] - minus.geom.node[k].pack.S[1]) / 0.02;
    worst = std::max(worst, std::abs(rate + 1.28));
  }
  CHECK(worst < geom.grid.h() * geom.grid.h());
  auto rep = variation::first_variation_check(spec, 0);
  CHECK(rep.evolution_residual < 5e-3);
}

TEST_CASE("evolution law converges on a bent cylinder graph") {
  auto model = spacetime::make_static_cylinder(2);
  std::vector<double> hs, e0, e1;
  for (int res : {16, 32, 64}) {
    auto grid = build_fiber_grid(model, res, res);
    Field u(grid.nodes());
    for (int i = 0; i < grid.n0; ++i)
      for (int j = 0; j < grid.n1; ++j)
        u[grid.idx(i, j)] = 0.25 * std::sin(grid.c0[i]) + 0.15 * std::cos(grid.c1[j]);
    auto geom = embed_graph(model, grid, GraphFunction{u});
    Field f0(grid.nodes());
    for (int i = 0; i < grid.n0; ++i)
      for (int j = 0; j < grid.n1; ++j)
        f0[grid.idx(i, j)] = std::cos(grid.c0[i]) * std::sin(grid.c1[j]);
    auto spec = variation::make_variation(geom, f0, 0.01);
    hs.push_back(grid.h());
    e0.push_back(variation::first_variation_check(spec, 0).evolution_residual);
    e1.push_back(variation::first_variation_check(spec, 1).evolution_residual);
  }
  const double s0 = fit_slope(hs, e0), s1 = fit_slope(hs, e1);
  CHECK(s0 > 1.6);
  CHECK(s0 < 2.6);
  CHECK(s1 > 1.6);
  CHECK(s1 < 2.6);
}

TEST_CASE("balance of volume vanishes exactly for an odd speed") {
  SUBCASE("sphere, polar cosine") {
    auto geom = de_sitter_slice(16, 32, kLn2);
    auto spec = variation::make_variation(geom, polar_cosine(geom.grid), 0.01);
    CHECK(variation::balance_of_volume(spec, 0.0) < 1e-10);
  }
  SUBCASE("torus, sine column") {
    auto model = spacetime::make_static_cylinder(2);
    auto grid = build_fiber_grid(model, 16, 16);
    auto geom = embed_graph(model, grid, GraphFunction{Field(grid.nodes(), 0.5)});
    Field f0(grid.nodes());
    for (int i = 0; i < grid.n0; ++i)
      for (int j = 0; j < grid.n1; ++j) f0[grid.idx(i, j)] = std::sin(grid.c0[i]);
    auto spec = variation::make_variation(geom, f0, 0.01);
    CHECK(variation::balance_of_volume(spec, 0.0) < 1e-12);
    // Away from t = 0 the graph is genuinely bent; still balanced to
    // the accuracy of the time stencil.
    CHECK(variation::balance_of_volume(spec, 0.3) < 1e-7);
  }
}

TEST_CASE("jacobi functional of the log-2 slice") {
  auto geom = de_sitter_slice(32, 64, kLn2);
  auto spec = variation::make_variation(geom, ones(geom), 0.01);

  SUBCASE("r = 0: lambda = 1.2 and J'' = 8 pi by all routes") {
    auto series = variation::jacobi_series(spec, 0);
    CHECK(series.c_r == 0.0);
    CHECK(series.mean_h_next == doctest::Approx(0.6).epsilon(1e-3));
    CHECK(series.lambda == doctest::Approx(1.2).epsilon(1e-3));
    auto rep = variation::second_variation_check(spec, 0);
    CHECK(rep.fd == doctest::Approx(8.0 * kPi).epsilon(5e-3));
    CHECK(rep.direct == doctest::Approx(8.0 * kPi).epsilon(5e-3));
    CHECK(rep.bilinear == doctest::Approx(8.0 * kPi).epsilon(5e-3));
    CHECK(rep.max_spread < 5e-2 * (1.0 + std::abs(rep.fd)));
  }
  SUBCASE("r = 1: lambda = 2.72 and J'' = 9.6 pi by all routes") {
    auto series = variation::jacobi_series(spec, 1);
    CHECK(series.c_r == doctest::Approx(2.0));
    CHECK(series.lambda == doctest::Approx(2.72).epsilon(1e-3));
    auto rep = variation::second_variation_check(spec, 1);
    CHECK(rep.fd == doctest::Approx(9.6 * kPi).epsilon(5e-3));
    CHECK(rep.direct == doctest::Approx(9.6 * kPi).epsilon(5e-3));
    CHECK(rep.bilinear == doctest::Approx(9.6 * kPi).epsilon(5e-3));
    CHECK(rep.max_spread < 5e-2 * (1.0 + std::abs(rep.fd)));
  }
}

TEST_CASE("jacobi second variation on the static cylinder") {
  auto model = spacetime::make_static_cylinder(2);
  auto grid = build_fiber_grid(model, 64, 64);
  auto geom = embed_graph(model, grid, GraphFunction{Field(grid.nodes(), 0.0)});
  Field f0(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j) f0[grid.idx(i, j)] = std::sin(grid.c0[i]);
  auto spec = variation::make_variation(geom, f0, 0.01);
  auto rep = variation::second_variation_check(spec, 0);
  // Continuum value -2 pi^2; the flux stencil symbol shaves (sin h / h)^2.
  const double h = grid.h0;
  const double symbol = std::pow(std::sin(h) / h, 2.0);
  CHECK(rep.direct == doctest::Approx(-2.0 * kPi * kPi * symbol).epsilon(1e-6));
  CHECK(rep.fd == doctest::Approx(-2.0 * kPi * kPi).epsilon(2e-2));
  CHECK(rep.bilinear == doctest::Approx(-2.0 * kPi * kPi).epsilon(2e-2));
  CHECK(rep.max_spread < 0.1);
}

TEST_CASE("jacobi routes refuse a base without constant next curvature") {
  auto model = spacetime::make_de_sitter(2);
  auto grid = build_fiber_grid(model, 32, 64);
  Field u(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j)
      u[grid.idx(i, j)] = kLn2 + 0.15 * std::cos(2.0 * grid.c0[i]);
  auto geom = embed_graph(model, grid, GraphFunction{u});
  auto spec = variation::make_variation(geom, ones(geom), 0.01);
  CHECK_THROWS_AS((void)variation::jacobi_series(spec, 0), PreconditionError);
  CHECK_THROWS_AS((void)variation::second_variation_check(spec, 0), PreconditionError);
}

TEST_CASE("variation guards") {
  auto geom = de_sitter_slice(8, 16, 0.0);
  CHECK_THROWS_AS((void)variation::make_variation(geom, Field(3, 1.0), 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)variation::make_variation(geom, ones(geom), 0.0),
                  std::invalid_argument);
  auto spec = variation::make_variation(geom, ones(geom), 0.01);
  CHECK_THROWS_AS((void)variation::first_variation_check(spec, 2), std::domain_error);
  CHECK_THROWS_AS((void)variation::first_variation_check(spec, -1), std::domain_error);
}

}  // TEST_SUITE
