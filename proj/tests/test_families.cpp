// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "rstab/families.hpp"
#include "rstab/spacetime.hpp"
#include "rstab/surface.hpp"
#include "rstab/types.hpp"

using namespace rstab;

namespace {

std::string thrown_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const ManifestError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("families") {

TEST_CASE("call syntax parses names and numeric arguments") {
  const auto a = families::parse_family("slice(0.5)");
  CHECK(a.name == "slice");
  REQUIRE(a.args.size() == 1);
  CHECK(a.args[0] == doctest::Approx(0.5));

  const auto b = families::parse_family("  slice_plus( 0.5 , -0.1, 2, 1 ) ");
  CHECK(b.name == "slice_plus");
  REQUIRE(b.args.size() == 4);
  CHECK(b.args[1] == doctest::Approx(-0.1));
  CHECK(b.args[3] == doctest::Approx(1.0));
}

TEST_CASE("parse errors carry the nearest catalog name") {
  CHECK(families::nearest_family("slice_plu") == "slice_plus");
  CHECK(families::nearest_family("forier") == "fourier");
  const auto msg = thrown_message([] { families::parse_family("slice_plu(1, 2, 3, 4)"); });
  CHECK(msg.find("slice_plu") != std::string::npos);
  CHECK(msg.find("slice_plus") != std::string::npos);

  CHECK_THROWS_AS(families::parse_family("slice(1"), ManifestError);
  CHECK_THROWS_AS(families::parse_family("slice(one)"), ManifestError);
  CHECK_THROWS_AS(families::parse_family("slice"), ManifestError);
  CHECK_THROWS_AS(families::parse_family("(1)"), ManifestError);
}

TEST_CASE("validation checks role, arity, grid, and mode indices") {
  using families::FamilyRole;
  const auto sphere = surface::GridKind::SphereLatLong;
  const auto torus = surface::GridKind::TorusPeriodic;

  // Role mismatch in both directions.
  CHECK_THROWS_AS(families::validate_family(families::parse_family("const(1)"),
                                            FamilyRole::Surface, sphere),
                  ManifestError);
  CHECK_THROWS_AS(families::validate_family(families::parse_family("slice(0)"),
                                            FamilyRole::Variation, sphere),
                  ManifestError);

  // Arity errors spell out the full signature.
  const auto msg = thrown_message([&] {
    families::validate_family(families::parse_family("slice_plus(0.5, 0.1)"),
                              FamilyRole::Surface, sphere);
  });
  CHECK(msg.find("slice_plus(s0, eps, k0, k1)") != std::string::npos);

  // Grid restrictions.
  CHECK_THROWS_AS(families::validate_family(families::parse_family("harmonic(2, 0, 1)"),
                                            FamilyRole::Variation, torus),
                  ManifestError);
  CHECK_THROWS_AS(families::validate_family(families::parse_family("fourier(1, 0, 1)"),
                                            FamilyRole::Variation, sphere),
                  ManifestError);

  // Mode indices must be small integers; sphere modes need |m| <= l.
  CHECK_THROWS_AS(families::validate_family(families::parse_family("slice_plus(0, 0.1, 2.5, 0)"),
                                            FamilyRole::Surface, sphere),
                  ManifestError);
  CHECK_THROWS_AS(families::validate_family(families::parse_family("slice_plus(0, 0.1, 1, 2)"),
                                            FamilyRole::Surface, sphere),
                  ManifestError);
  CHECK_THROWS_AS(families::validate_family(families::parse_family("harmonic(1, -2, 1)"),
                                            FamilyRole::Variation, sphere),
                  ManifestError);
  CHECK_NOTHROW(families::validate_family(families::parse_family("slice_plus(0, 0.1, 1, 2)"),
                                          FamilyRole::Surface, torus));
}

TEST_CASE("every catalog example parses and validates on a matching grid") {
  for (const auto& info : families::catalog()) {
    const auto spec = families::parse_family(info.example);
    CHECK(spec.name == info.name);
    const auto kind = info.grids == "torus" ? surface::GridKind::TorusPeriodic
                                            : surface::GridKind::SphereLatLong;
    CHECK_NOTHROW(families::validate_family(spec, info.role, kind));
  }
}

TEST_CASE("real harmonics match their closed forms") {
  // Condon-Shortley phase kept from std::sph_legendre: Y(1,1) carries a
  // leading minus against sin(theta) cos(phi).
  const double th = 0.8, ph = 1.1;
  CHECK(families::real_harmonic(0, 0, th, ph) ==
        doctest::Approx(1.0 / std::sqrt(4.0 * std::numbers::pi)));
  CHECK(families::real_harmonic(2, 0, th, ph) ==
        doctest::Approx(std::sqrt(5.0 / (16.0 * std::numbers::pi)) *
                        (3.0 * std::cos(th) * std::cos(th) - 1.0)));
  CHECK(families::real_harmonic(1, 1, th, ph) ==
        doctest::Approx(-std::sqrt(3.0 / (4.0 * std::numbers::pi)) * std::sin(th) *
                        std::cos(ph)));
  CHECK(families::real_harmonic(1, -1, th, ph) ==
        doctest::Approx(-std::sqrt(3.0 / (4.0 * std::numbers::pi)) * std::sin(th) *
                        std::sin(ph)));
}

TEST_CASE("real harmonics are orthonormal under the fiber quadrature") {
  const auto model = spacetime::make_de_sitter(2);
  const auto grid = surface::build_fiber_grid(model, 32, 64);
  Field w(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j)
      w[grid.idx(i, j)] = grid.fiber_sqrt_det(i) * grid.h0 * grid.h1;

  const int modes[5][2] = {{0, 0}, {1, 0}, {1, 1}, {2, -1}, {3, 2}};
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q <= p; ++q) {
      Field prod(grid.nodes());
      for (int i = 0; i < grid.n0; ++i)
        for (int j = 0; j < grid.n1; ++j)
          prod[grid.idx(i, j)] =
              families::real_harmonic(modes[p][0], modes[p][1], grid.c0[i], grid.c1[j]) *
              families::real_harmonic(modes[q][0], modes[q][1], grid.c0[i], grid.c1[j]);
      const double dot = surface::weighted_sum(prod, w);
      CHECK(dot == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(0.02).scale(1.0));
    }
}

TEST_CASE("surface families produce the advertised height functions") {
  const auto ds = spacetime::make_de_sitter(2);
  const auto sphere = surface::build_fiber_grid(ds, 16, 32);
  const auto flat = families::surface_field(sphere, families::parse_family("slice(0.25)"));
  for (double v : flat) CHECK(v == doctest::Approx(0.25));

  const auto bumped = families::surface_field(
      sphere, families::parse_family("slice_plus(0.25, 0.1, 2, 0)"));
  for (int i = 0; i < sphere.n0; ++i)
    for (int j = 0; j < sphere.n1; ++j)
      CHECK(bumped[sphere.idx(i, j)] ==
            doctest::Approx(0.25 + 0.1 * families::real_harmonic(2, 0, sphere.c0[i],
                                                                 sphere.c1[j])));

  const auto cyl = spacetime::make_static_cylinder(2);
  const auto torus = surface::build_fiber_grid(cyl, 8, 8);
  const auto wave = families::surface_field(
      torus, families::parse_family("slice_plus(0.2, 0.3, 1, 1)"));
  for (int i = 0; i < torus.n0; ++i)
    for (int j = 0; j < torus.n1; ++j)
      CHECK(wave[torus.idx(i, j)] ==
            doctest::Approx(0.2 + 0.3 * std::cos(torus.c0[i] + torus.c1[j])));
}

TEST_CASE("variation families produce the advertised speeds") {
  const auto ds = spacetime::make_de_sitter(2);
  const auto sphere = surface::build_fiber_grid(ds, 8, 16);
  const auto c = families::variation_field(sphere, families::parse_family("const(2)"));
  for (double v : c) CHECK(v == doctest::Approx(2.0));

  const auto harm =
      families::variation_field(sphere, families::parse_family("harmonic(2, 1, 0.5)"));
  for (int i = 0; i < sphere.n0; ++i)
    for (int j = 0; j < sphere.n1; ++j)
      CHECK(harm[sphere.idx(i, j)] ==
            doctest::Approx(0.5 * families::real_harmonic(2, 1, sphere.c0[i], sphere.c1[j])));

  const auto cyl = spacetime::make_static_cylinder(2);
  const auto torus = surface::build_fiber_grid(cyl, 8, 8);
  const auto four =
      families::variation_field(torus, families::parse_family("fourier(1, 2, 0.25)"));
  for (int i = 0; i < torus.n0; ++i)
    for (int j = 0; j < torus.n1; ++j)
      CHECK(four[torus.idx(i, j)] ==
            doctest::Approx(0.25 * std::cos(torus.c0[i] + 2.0 * torus.c1[j])));
}

}  // TEST_SUITE
