// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "rstab/fiber_grid.hpp"
#include "rstab/spacetime.hpp"
#include "rstab/surface.hpp"
#include "rstab/types.hpp"

using namespace rstab;
using surface::FiberGrid;
using surface::PoleParity;

namespace {

constexpr double kPi = 3.14159265358979323846;

double fit_order(double h1, double e1, double h2, double e2) {
  return std::log(e1 / e2) / std::log(h1 / h2);
}

Field sphere_scalar(const FiberGrid& g) {
  // x-component of the unit sphere point: smooth across both poles
  Field f(g.nodes());
  for (int i = 0; i < g.n0; ++i)
    for (int j = 0; j < g.n1; ++j)
      f[g.idx(i, j)] = std::sin(g.c0[i]) * std::cos(g.c1[j]);
  return f;
}

}  // namespace

TEST_SUITE("surface") {

TEST_CASE("grid guards") {
  const auto ds = spacetime::make_de_sitter(2);
  const auto cyl = spacetime::make_static_cylinder(2);
  CHECK_THROWS_AS(surface::build_fiber_grid(ds, 16, 31), DiscretizationError);
  CHECK_THROWS_AS(surface::build_fiber_grid(cyl, 2, 16), DiscretizationError);
  CHECK_THROWS_AS(surface::build_fiber_grid(ds, 2048, 2048), CapacityError);
}

TEST_CASE("fiber area converges on the sphere and is exact on the torus") {
  const auto ds = spacetime::make_de_sitter(2);
  const double e1 = std::abs(surface::fiber_area(surface::build_fiber_grid(ds, 16, 32)) - 4 * kPi);
  const double e2 = std::abs(surface::fiber_area(surface::build_fiber_grid(ds, 32, 64)) - 4 * kPi);
  CHECK(fit_order(kPi / 16, e1, kPi / 32, e2) == doctest::Approx(2.0).epsilon(0.1));

  const auto cyl = spacetime::make_static_cylinder(2);
  const auto tg = surface::build_fiber_grid(cyl, 24, 16);
  CHECK(surface::fiber_area(tg) == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("pole stencils differentiate a global scalar at second order") {
  const auto ds = spacetime::make_de_sitter(2);
  double err[2];
  int res[2] = {16, 32};
  for (int t = 0; t < 2; ++t) {
    const auto g = surface::build_fiber_grid(ds, res[t], 2 * res[t]);
    const Field f = sphere_scalar(g);
    double worst = 0.0;
    for (int i = 0; i < g.n0; ++i)
      for (int j = 0; j < g.n1; ++j) {
        const double exact = std::cos(g.c0[i]) * std::cos(g.c1[j]);
        worst = std::max(worst, std::abs(g.d0(f, i, j, PoleParity::Even) - exact));
      }
    err[t] = worst;
  }
  CHECK(fit_order(kPi / res[0], err[0], kPi / res[1], err[1]) ==
        doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("cross derivatives commute exactly through the ghost rows") {
  const auto ds = spacetime::make_de_sitter(2);
  const auto g = surface::build_fiber_grid(ds, 12, 24);
  const Field f = sphere_scalar(g);
  const Field d1 = g.deriv1(f, PoleParity::Even);
  for (int i = 0; i < g.n0; ++i)
    for (int j = 0; j < g.n1; ++j)
      CHECK(g.d01(f, i, j, PoleParity::Even) ==
            doctest::Approx(g.d0(d1, i, j, PoleParity::Even)).epsilon(1e-14));
}

TEST_CASE("theta-differentiated fields telescope to zero over the sphere") {
  const auto ds = spacetime::make_de_sitter(2);
  const auto g = surface::build_fiber_grid(ds, 20, 40);
  const Field flux = g.deriv0(sphere_scalar(g), PoleParity::Even);  // odd field
  double total = 0.0;
  for (int i = 0; i < g.n0; ++i)
    for (int j = 0; j < g.n1; ++j) total += g.d0(flux, i, j, PoleParity::Odd);
  CHECK(std::abs(total) < 1e-11);
}

TEST_CASE("slice calibration: shape operator and area converge at order 2") {
  const auto ds = spacetime::make_de_sitter(2);
  const double s0 = std::log(2.0);
  double aerr[2], area_err[2];
  int res[2] = {16, 32};
  for (int t = 0; t < 2; ++t) {
    const auto g = surface::build_fiber_grid(ds, res[t], 2 * res[t]);
    surface::GraphFunction u{Field(g.nodes(), s0)};
    const auto geom = surface::embed_graph(ds, g, u);
    double worst = 0.0;
    for (const auto& node : geom.node) {
      Eigen::Matrix2d target = -0.6 * Eigen::Matrix2d::Identity();
      worst = std::max(worst, (node.a_frame - target).cwiseAbs().maxCoeff());
    }
    aerr[t] = worst;
    area_err[t] = std::abs(geom.area - 6.25 * kPi);
    CHECK(geom.quality.max_normal_residual < 1e-12);
    CHECK(geom.quality.max_cosh_mismatch < 1e-12);
  }
  CHECK(fit_order(kPi / res[0], aerr[0], kPi / res[1], aerr[1]) ==
        doctest::Approx(2.0).epsilon(0.15));
  CHECK(fit_order(kPi / res[0], area_err[0], kPi / res[1], area_err[1]) ==
        doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("slice pointwise fields carry the closed forms") {
  const auto ds = spacetime::make_de_sitter(2);
  const auto g = surface::build_fiber_grid(ds, 32, 64);
  const auto geom =
      surface::embed_graph(ds, g, surface::GraphFunction{Field(g.nodes(), std::log(2.0))});
  const auto f0 = surface::pointwise_curvatures(geom, 0);
  const auto f1 = surface::pointwise_curvatures(geom, 1);
  for (int k = 0; k < g.nodes(); k += 97) {
    CHECK(f1.S[k] == doctest::Approx(-1.2).epsilon(2e-3));
    CHECK(f1.H[k] == doctest::Approx(0.6).epsilon(2e-3));
    CHECK(f0.H[k] == doctest::Approx(1.0));
    CHECK(f1.trP[k] == doctest::Approx(1.2).epsilon(2e-3));
    CHECK(f1.trA2P[k] == doctest::Approx(0.432).epsilon(5e-3));
    CHECK(f0.margin[k] == doctest::Approx(0.8).epsilon(5e-3));
    CHECK(f1.margin[k] == doctest::Approx(0.48).epsilon(5e-3));
    CHECK(geom.node[k].eta == doctest::Approx(-1.25).epsilon(1e-10));
  }
  CHECK(surface::integrate(geom, Field(g.nodes(), 1.0)) ==
        doctest::Approx(geom.area).epsilon(1e-14));
}

TEST_CASE("cylinder slices are flat and exact") {
  const auto cyl = spacetime::make_static_cylinder(2);
  const auto g = surface::build_fiber_grid(cyl, 16, 16);
  const auto geom =
      surface::embed_graph(cyl, g, surface::GraphFunction{Field(g.nodes(), 0.5)});
  for (const auto& node : geom.node) {
    CHECK(node.a_frame.cwiseAbs().maxCoeff() < 1e-13);
    CHECK(node.cosh_theta == doctest::Approx(1.0));
    CHECK(node.eta == doctest::Approx(-1.0));
  }
  CHECK(geom.area == doctest::Approx(4 * kPi * kPi).epsilon(1e-13));
}

TEST_CASE("perturbed graphs keep uniform second-order curvature errors") {
  // u = s0 + eps * z over the sphere; compare H_1 against a fine solution
  const auto ds = spacetime::make_de_sitter(2);
  const double s0 = 0.4, eps = 0.1;
  auto run = [&](int n0) {
    const auto g = surface::build_fiber_grid(ds, n0, 2 * n0);
    Field u(g.nodes());
    for (int i = 0; i < g.n0; ++i)
      for (int j = 0; j < g.n1; ++j)
        u[g.idx(i, j)] = s0 + eps * std::cos(g.c0[i]);
    return surface::embed_graph(ds, g, surface::GraphFunction{u});
  };
  const auto coarse = run(16);
  const auto mid = run(32);
  const auto fine = run(64);
  // successive differences of the total mean curvature shrink at order 2
  const double m1 = surface::integrate(coarse, surface::pointwise_curvatures(coarse, 0).H);
  const double m2 = surface::integrate(mid, surface::pointwise_curvatures(mid, 0).H);
  const double m3 = surface::integrate(fine, surface::pointwise_curvatures(fine, 0).H);
  const double order = fit_order(kPi / 16, std::abs(m1 - m2), kPi / 32, std::abs(m2 - m3));
  CHECK(order == doctest::Approx(2.0).epsilon(0.25));
  CHECK(coarse.quality.max_b_asymmetry < 0.03);
  CHECK(mid.quality.max_b_asymmetry < 0.01);
}

TEST_CASE("non-spacelike graphs are rejected with offender nodes") {
  const auto cyl = spacetime::make_static_cylinder(2);
  const auto g = surface::build_fiber_grid(cyl, 32, 32);
  Field u(g.nodes());
  for (int i = 0; i < g.n0; ++i)
    for (int j = 0; j < g.n1; ++j) u[g.idx(i, j)] = 1.2 * std::sin(g.c0[i]);
  bool thrown = false;
  try {
    surface::embed_graph(cyl, g, surface::GraphFunction{u});
  } catch (const SpacelikeViolation& e) {
    thrown = true;
    CHECK(!e.nodes.empty());
  }
  CHECK(thrown);
}

TEST_CASE("model and grid kinds must match") {
  const auto ds = spacetime::make_de_sitter(2);
  const auto cyl = spacetime::make_static_cylinder(2);
  const auto g = surface::build_fiber_grid(cyl, 16, 16);
  CHECK_THROWS_AS(surface::embed_graph(ds, g, surface::GraphFunction{Field(g.nodes(), 0.0)}),
                  UnsupportedModelError);
}

}  // TEST_SUITE
