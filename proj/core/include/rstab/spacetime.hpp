// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rstab::spacetime {

// Warping function phi(s) with analytic first and second derivatives and
// the antiderivative of phi^n (used by the volume functional).
struct WarpingFunction {
  std::function<double(double)> phi, dphi, ddphi;

  // Max relative mismatch between the analytic derivatives and 4th-order
  // central differences sampled uniformly on [lo, hi].
  double derivative_residual(double lo, double hi, int samples = 101) const;
};

enum class FiberKind { Sphere, Torus };

// Lorentzian warped product I x_phi F, metric -ds^2 + phi(s)^2 ghat.
struct GRWModel {
  std::string name;
  int n = 2;                          // fiber dimension
  FiberKind fiber = FiberKind::Sphere;
  double fiber_curvature = 1.0;       // constant curvature k of (F, ghat)
  WarpingFunction warping;
  std::function<double(double)> volume_primitive;  // d/ds -> phi(s)^n
  std::optional<double> c;            // ambient sectional curvature, if constant
  double interval_lo = -3.0;
  double interval_hi = 3.0;
};

GRWModel make_de_sitter(int n = 2);
GRWModel make_static_cylinder(int n = 2);

// Residuals of the constant-curvature conditions at s:
//   radial     phi''/phi - c
//   tangential (phi'^2 + k)/phi^2 - c
// Both vanish identically iff the ambient has constant curvature c.
struct CurvatureResiduals {
  double radial = 0.0, tangential = 0.0;
};
CurvatureResiduals curvature_residuals(const GRWModel& model, double s);

// Exact data of the totally umbilic slice {s0} x F with respect to the
// future-pointing unit normal: umbilicity factor -(phi'/phi)(s0), r-th
// mean curvatures H_r = (phi'/phi)^r, support eta = -phi, conformal
// factor psi = phi', N(psi) = phi'' (cosh theta = 1 on a slice).
struct SliceData {
  double s0 = 0.0;
  double lambda = 0.0;
  std::vector<double> H;   // H_0..H_n
  double eta = 0.0;
  double psi = 0.0;
  double n_psi = 0.0;
  double area_factor = 0.0;  // phi(s0)^n
};
SliceData slice_data(const GRWModel& model, double s0);

}  // namespace rstab::spacetime
