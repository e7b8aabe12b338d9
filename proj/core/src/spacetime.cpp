// SPDX-License-Identifier: MIT
#include "rstab/spacetime.hpp"

#include <cmath>
#include <stdexcept>

#include "rstab/types.hpp"

namespace rstab::spacetime {

double WarpingFunction::derivative_residual(double lo, double hi, int samples) const {
  if (samples < 2) throw std::invalid_argument("derivative_residual: samples < 2");
  const double h = 1e-2;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double s = lo + (hi - lo) * k / (samples - 1);
    const auto fd4 = [&](const std::function<double(double)>& f) {
      return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
    };
    const double scale1 = 1.0 + std::abs(dphi(s));
    const double scale2 = 1.0 + std::abs(ddphi(s));
    worst = std::max(worst, std::abs(fd4(phi) - dphi(s)) / scale1);
    worst = std::max(worst, std::abs(fd4(dphi) - ddphi(s)) / scale2);
  }
  return worst;
}

GRWModel make_de_sitter(int n) {
  if (n < 2) throw std::domain_error("make_de_sitter: fiber dimension must be >= 2");
  GRWModel m;
  m.name = "de_sitter";
  m.n = n;
  m.fiber = FiberKind::Sphere;
  m.fiber_curvature = 1.0;
  m.warping.phi = [](double s) { return std::cosh(s); };
  m.warping.dphi = [](double s) { return std::sinh(s); };
  m.warping.ddphi = [](double s) { return std::cosh(s); };
  if (n == 2) {
    // int cosh^2 = s/2 + sinh(2s)/4
    m.volume_primitive = [](double s) { return 0.5 * s + 0.25 * std::sinh(2 * s); };
  } else if (n == 3) {
    m.volume_primitive = [](double s) {
      return std::sinh(s) + std::pow(std::sinh(s), 3) / 3.0;
    };
  } else {
    m.volume_primitive = nullptr;
  }
  m.c = 1.0;
  return m;
}

GRWModel make_static_cylinder(int n) {
  if (n < 2) throw std::domain_error("make_static_cylinder: fiber dimension must be >= 2");
  GRWModel m;
  m.name = "static_cylinder";
  m.n = n;
  m.fiber = FiberKind::Torus;
  m.fiber_curvature = 0.0;
  m.warping.phi = [](double) { return 1.0; };
  m.warping.dphi = [](double) { return 0.0; };
  m.warping.ddphi = [](double) { return 0.0; };
  m.volume_primitive = [](double s) { return s; };
  m.c = 0.0;
  return m;
}

CurvatureResiduals curvature_residuals(const GRWModel& model, double s) {
  if (!model.c)
    throw UnsupportedModelError("curvature_residuals: model has no constant curvature");
  const double phi = model.warping.phi(s);
  const double dphi = model.warping.dphi(s);
  const double ddphi = model.warping.ddphi(s);
  CurvatureResiduals res;
  res.radial = ddphi / phi - *model.c;
  res.tangential = (dphi * dphi + model.fiber_curvature) / (phi * phi) - *model.c;
  return res;
}

SliceData slice_data(const GRWModel& model, double s0) {
  if (s0 < model.interval_lo || s0 > model.interval_hi)
    throw std::domain_error("slice_data: s0 outside the model interval");
  const double phi = model.warping.phi(s0);
  const double dphi = model.warping.dphi(s0);
  SliceData d;
  d.s0 = s0;
  d.lambda = -dphi / phi;
  d.H.resize(model.n + 1);
  for (int r = 0; r <= model.n; ++r) d.H[r] = std::pow(dphi / phi, r);
  d.eta = -phi;
  d.psi = dphi;
  d.n_psi = model.warping.ddphi(s0);
  d.area_factor = std::pow(phi, model.n);
  return d;
}

}  // namespace rstab::spacetime
