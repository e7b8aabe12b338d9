// SPDX-License-Identifier: MIT
#include "rstab/calculus.hpp"

namespace rstab::calculus {

using surface::FiberGrid;
using surface::PoleParity;
using surface::SurfaceGeometry;

namespace {

void check_field(const SurfaceGeometry& geom, const Field& f, const char* who) {
  if (f.size() != geom.node.size()) throw std::invalid_argument(std::string(who) + ": field size mismatch");
}

void check_order(const SurfaceGeometry& geom, int r, const char* who) {
  if (r < 0 || r > geom.model.n - 1)
    throw std::domain_error(std::string(who) + ": need 0 <= r <= n-1");
}

// Stencil dispatch: the flat chart keeps the classic three-point forms
// (their symbols are pinned by tests), the latitude chart needs the
// five-point fourth-order forms because 1/sin(theta) metric factors eat
// up to two orders of stencil accuracy near the poles.
struct Diff {
  const FiberGrid& g;
  bool wide;

  explicit Diff(const FiberGrid& grid)
      : g(grid), wide(grid.kind == surface::GridKind::SphereLatLong) {}

  double d0(const Field& f, int i, int j, PoleParity p) const {
    return wide ? g.d0w(f, i, j, p) : g.d0(f, i, j, p);
  }
  double d1(const Field& f, int i, int j, PoleParity p) const {
    return wide ? g.d1w(f, i, j, p) : g.d1(f, i, j, p);
  }
  double d00(const Field& f, int i, int j, PoleParity p) const {
    return wide ? g.d00w(f, i, j, p) : g.d00(f, i, j, p);
  }
  double d11(const Field& f, int i, int j, PoleParity p) const {
    return wide ? g.d11w(f, i, j, p) : g.d11(f, i, j, p);
  }
  double d01(const Field& f, int i, int j, PoleParity p) const {
    return wide ? g.d01w(f, i, j, p) : g.d01(f, i, j, p);
  }
  Field deriv0(const Field& f, PoleParity p) const {
    Field out(static_cast<std::size_t>(g.nodes()));
    for (int i = 0; i < g.n0; ++i)
      for (int j = 0; j < g.n1; ++j) out[g.idx(i, j)] = d0(f, i, j, p);
    return out;
  }
  Field deriv1(const Field& f, PoleParity p) const {
    Field out(static_cast<std::size_t>(g.nodes()));
    for (int i = 0; i < g.n0; ++i)
      for (int j = 0; j < g.n1; ++j) out[g.idx(i, j)] = d1(f, i, j, p);
    return out;
  }
};

// Metric component fields; the off-diagonal entry is odd across the poles.
struct MetricFields {
  Field g00, g01, g11, sqrtg;
};

MetricFields metric_fields(const SurfaceGeometry& geom) {
  const int count = geom.grid.nodes();
  MetricFields m;
  m.g00.resize(count);
  m.g01.resize(count);
  m.g11.resize(count);
  m.sqrtg.resize(count);
  for (int k = 0; k < count; ++k) {
    m.g00[k] = geom.node[k].g(0, 0);
    m.g01[k] = geom.node[k].g(0, 1);
    m.g11[k] = geom.node[k].g(1, 1);
    m.sqrtg[k] = geom.node[k].sqrt_det_g;
  }
  return m;
}

}  // namespace

TangentField gradient(const SurfaceGeometry& geom, const Field& f) {
  check_field(geom, f, "gradient");
  const Diff dd(geom.grid);
  const Field d0 = dd.deriv0(f, PoleParity::Even);
  const Field d1 = dd.deriv1(f, PoleParity::Even);
  TangentField out;
  out.v.resize(geom.grid.nodes());
  for (int k = 0; k < geom.grid.nodes(); ++k)
    out.v[k] = geom.node[k].g_inv * Eigen::Vector2d(d0[k], d1[k]);
  return out;
}

OperatorField hessian(const SurfaceGeometry& geom, const Field& f) {
  check_field(geom, f, "hessian");
  const FiberGrid& grid = geom.grid;
  const Diff dd(grid);
  const MetricFields m = metric_fields(geom);
  const Field dg00_0 = dd.deriv0(m.g00, PoleParity::Even);
  const Field dg00_1 = dd.deriv1(m.g00, PoleParity::Even);
  const Field dg01_0 = dd.deriv0(m.g01, PoleParity::Odd);
  const Field dg01_1 = dd.deriv1(m.g01, PoleParity::Odd);
  const Field dg11_0 = dd.deriv0(m.g11, PoleParity::Even);
  const Field dg11_1 = dd.deriv1(m.g11, PoleParity::Even);

  OperatorField out;
  out.m.resize(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      // dg[l](a,b) = d_l g_ab
      Eigen::Matrix2d dg0, dg1;
      dg0 << dg00_0[k], dg01_0[k], dg01_0[k], dg11_0[k];
      dg1 << dg00_1[k], dg01_1[k], dg01_1[k], dg11_1[k];
      const Eigen::Matrix2d dg[2] = {dg0, dg1};
      const Eigen::Vector2d df(dd.d0(f, i, j, PoleParity::Even),
                               dd.d1(f, i, j, PoleParity::Even));
      Eigen::Matrix2d hess;  // (0,2) components
      hess(0, 0) = dd.d00(f, i, j, PoleParity::Even);
      hess(1, 1) = dd.d11(f, i, j, PoleParity::Even);
      hess(0, 1) = hess(1, 0) = dd.d01(f, i, j, PoleParity::Even);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double correction = 0.0;
          for (int l = 0; l < 2; ++l) {
            // Gamma^l_{ab} = 1/2 g^{lm} (d_a g_bm + d_b g_am - d_m g_ab)
            double gamma = 0.0;
            for (int mm = 0; mm < 2; ++mm)
              gamma += 0.5 * geom.node[k].g_inv(l, mm) *
                       (dg[a](b, mm) + dg[b](a, mm) - dg[mm](a, b));
            correction += gamma * df[l];
          }
          hess(a, b) -= correction;
        }
      out.m[k] = geom.node[k].g_inv * hess;
    }
  return out;
}

OperatorField newton_field(const SurfaceGeometry& geom, int r) {
  check_order(geom, r, "newton_field");
  OperatorField out;
  out.m.resize(geom.grid.nodes());
  for (int k = 0; k < geom.grid.nodes(); ++k) {
    const auto& node = geom.node[k];
    Eigen::Matrix2d p_frame = Eigen::Matrix2d::Identity();
    for (int q = 1; q <= r; ++q) {
      const double sign = (q % 2 == 0) ? 1.0 : -1.0;
      p_frame = sign * node.pack.S[q] * Eigen::Matrix2d::Identity() + node.a_frame * p_frame;
    }
    out.m[k] = node.frame * p_frame * node.frame.inverse();
  }
  return out;
}

Field lr_trace_form(const SurfaceGeometry& geom, int r, const Field& f) {
  check_field(geom, f, "lr_trace_form");
  check_order(geom, r, "lr_trace_form");
  const OperatorField p = newton_field(geom, r);
  const OperatorField hess = hessian(geom, f);
  Field out(geom.grid.nodes());
  for (int k = 0; k < geom.grid.nodes(); ++k) out[k] = (p.m[k] * hess.m[k]).trace();
  return out;
}

Field lr_divergence_form(const SurfaceGeometry& geom, int r, const Field& f) {
  check_field(geom, f, "lr_divergence_form");
  check_order(geom, r, "lr_divergence_form");
  const FiberGrid& grid = geom.grid;
  const Diff dd(grid);
  const OperatorField p = newton_field(geom, r);
  const TangentField grad = gradient(geom, f);
  Field flux0(grid.nodes()), flux1(grid.nodes());
  for (int k = 0; k < grid.nodes(); ++k) {
    const Eigen::Vector2d pf = p.m[k] * grad.v[k];
    flux0[k] = geom.node[k].sqrt_det_g * pf[0];
    flux1[k] = geom.node[k].sqrt_det_g * pf[1];
  }
  // Ghost parity of the theta flux: the signed continuation of sqrt(g)
  // through a pole flips once and so does the theta frame, so the product
  // continues evenly; the phi flux flips only through sqrt(g).
  Field out(grid.nodes());
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      out[k] = (dd.d0(flux0, i, j, PoleParity::Even) +
                dd.d1(flux1, i, j, PoleParity::Odd)) /
               geom.node[k].sqrt_det_g;
    }
  return out;
}

double dirichlet_form(const SurfaceGeometry& geom, int r, const Field& f, const Field& g) {
  check_field(geom, f, "dirichlet_form");
  check_field(geom, g, "dirichlet_form");
  check_order(geom, r, "dirichlet_form");
  const FiberGrid& grid = geom.grid;
  const Diff dd(grid);
  const OperatorField p = newton_field(geom, r);
  const Field df0 = dd.deriv0(f, PoleParity::Even);
  const Field df1 = dd.deriv1(f, PoleParity::Even);
  const Field dg0 = dd.deriv0(g, PoleParity::Even);
  const Field dg1 = dd.deriv1(g, PoleParity::Even);
  Field density(grid.nodes());
  for (int k = 0; k < grid.nodes(); ++k) {
    // <P grad f, grad g> = df^T (P g^{-1}) dg, the middle matrix symmetric
    const Eigen::Matrix2d w = p.m[k] * geom.node[k].g_inv;
    const Eigen::Vector2d df(df0[k], df1[k]);
    const Eigen::Vector2d dg(dg0[k], dg1[k]);
    density[k] = df.dot(0.5 * (w + w.transpose()) * dg) * geom.node[k].weight;
  }
  return surface::compensated_sum(density);
}

}  // namespace rstab::calculus
