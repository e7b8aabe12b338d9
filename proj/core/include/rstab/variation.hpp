// SPDX-License-Identifier: MIT
#pragma once

#include <array>

#include "rstab/surface.hpp"
#include "rstab/types.hpp"

namespace rstab::variation {

// Vertical variation u_t = u + t w of a base graph. The normal speed is
// f_t = w cosh(theta_t); w is chosen at t = 0 so that f_0 is the
// requested test function.
struct VariationSpec {
  spacetime::GRWModel model;
  surface::FiberGrid grid;
  Field u, w;
  double h_t = 0.01;
};

VariationSpec make_variation(const surface::SurfaceGeometry& base, const Field& f0,
                             double h_t = 0.01);

struct Evolved {
  surface::SurfaceGeometry geom;
  Field f;  // normal speed at this t
};
Evolved evolve(const VariationSpec& spec, double t);

// Constants c_r: zero for even r, c_1 = n c, and
// c_r = -c (n - r + 1)/(r - 1) c_{r-2} for odd r >= 3.
double cr_constant(int n, int r, double c);

// r-area functional: integral of F_r(S_1, ..., S_r) with
// F_0 = 1, F_1 = -S_1, F_r = (-1)^r S_r - c (n-r+1)/(r-1) F_{r-2}.
double r_area(const surface::SurfaceGeometry& geom, int r);

// Enclosed volume of the variation at time t relative to the zero slice,
// evaluated per node from the antiderivative of phi^n.
double enclosed_volume(const VariationSpec& spec, double t);

// |d/dt vol - integral of f dM_t|, the balance of volume at time t.
double balance_of_volume(const VariationSpec& spec, double t);

// First variation of the r-area: 4th-order centered difference vs the
// closed form integral of [(-1)^{r+1} (r+1) S_{r+1} + c_r] f, plus the
// pointwise evolution identity for S_{r+1}:
//   dS_{r+1}/dt = (-1)^{r+1} [L_r f + (c tr P_r - tr A^2 P_r) f]
//                 + <(dX/dt)^T, grad S_{r+1}>.
struct FirstVariationReport {
  double fd = 0.0;          // finite-difference derivative of the r-area
  double fd_coarse = 0.0;   // plain centered difference at 2 h_t
  double formula = 0.0;
  double residual = 0.0;    // |fd - formula|
  double evolution_residual = 0.0;  // max node defect of the S_{r+1} law
  // Area-weighted rms of the same defect. On latitude grids the max sits
  // in the pole rings, where differentiating the discrete curvature bias
  // costs a factor 1/(h sin theta); the integral norm keeps clean second
  // order there, so convergence claims should read this field.
  double evolution_residual_l2 = 0.0;
  double balance_residual = 0.0;    // balance of volume at t = 0
};
FirstVariationReport first_variation_check(const VariationSpec& spec, int r);

// Jacobi functional samples J_r = A_r - lambda vol on the 5-point stencil
// around t = 0, with lambda = c_r + b_r avg(H_{r+1}).
struct FunctionalSeries {
  std::array<double, 5> t{}, area_r{}, volume{}, jacobi{};
  double lambda = 0.0, c_r = 0.0, mean_h_next = 0.0;
};
FunctionalSeries jacobi_series(const VariationSpec& spec, int r);

// Second variation of the Jacobi functional through three routes: the
// 5-point second difference of J_r, the direct integrand
// (r+1) int [L_r f + (c tr P_r - tr A^2 P_r) f] f, and the Dirichlet form
// route (r+1) [-B_r(f,f) + int (c tr P_r - tr A^2 P_r) f^2].
struct SecondVariationReport {
  double fd = 0.0, direct = 0.0, bilinear = 0.0;
  double max_spread = 0.0;
};
SecondVariationReport second_variation_check(const VariationSpec& spec, int r);

}  // namespace rstab::variation
