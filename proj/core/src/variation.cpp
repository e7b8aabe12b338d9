// SPDX-License-Identifier: MIT
#include "rstab/variation.hpp"

#include <cmath>

#include "rstab/calculus.hpp"

namespace rstab::variation {

using surface::SurfaceGeometry;

namespace {

void check_order(const spacetime::GRWModel& model, int r, const char* who) {
  if (r < 0 || r > model.n - 1)
    throw std::domain_error(std::string(who) + ": need 0 <= r <= n-1");
}

double require_c(const spacetime::GRWModel& model, const char* who) {
  if (!model.c)
    throw UnsupportedModelError(std::string(who) + ": model curvature is not constant");
  return *model.c;
}

Field s_field(const SurfaceGeometry& geom, int order) {
  Field s(geom.node.size());
  for (std::size_t k = 0; k < geom.node.size(); ++k) s[k] = geom.node[k].pack.S[order];
  return s;
}

}  // namespace

VariationSpec make_variation(const SurfaceGeometry& base, const Field& f0, double h_t) {
  if (f0.size() != base.node.size())
    throw std::invalid_argument("make_variation: speed size does not match the grid");
  if (!(h_t > 0.0)) throw std::invalid_argument("make_variation: need h_t > 0");
  VariationSpec spec;
  spec.model = base.model;
  spec.grid = base.grid;
  spec.u = base.u;
  spec.h_t = h_t;
  spec.w.resize(f0.size());
  for (std::size_t k = 0; k < f0.size(); ++k) spec.w[k] = f0[k] / base.node[k].cosh_theta;
  return spec;
}

Evolved evolve(const VariationSpec& spec, double t) {
  Field ut(spec.u.size());
  for (std::size_t k = 0; k < spec.u.size(); ++k) ut[k] = spec.u[k] + t * spec.w[k];
  Evolved out{surface::embed_graph(spec.model, spec.grid, surface::GraphFunction{ut}), {}};
  out.f.resize(spec.u.size());
  for (std::size_t k = 0; k < spec.u.size(); ++k)
    out.f[k] = spec.w[k] * out.geom.node[k].cosh_theta;
  return out;
}

double cr_constant(int n, int r, double c) {
  if (r < 0 || r > n) throw std::domain_error("cr_constant: need 0 <= r <= n");
  if (r % 2 == 0) return 0.0;
  if (r == 1) return n * c;
  return -c * static_cast<double>(n - r + 1) / (r - 1) * cr_constant(n, r - 2, c);
}

double r_area(const SurfaceGeometry& geom, int r) {
  check_order(geom.model, r, "r_area");
  const double c = require_c(geom.model, "r_area");
  const int n = geom.model.n;
  Field density(geom.node.size());
  for (std::size_t k = 0; k < geom.node.size(); ++k) {
    const auto& s = geom.node[k].pack.S;
    double f_prev = 1.0, f_cur = (r >= 1) ? -s[1] : 1.0;
    for (int q = 2; q <= r; ++q) {
      const double sign = (q % 2 == 0) ? 1.0 : -1.0;
      const double f_next = sign * s[q] - c * static_cast<double>(n - q + 1) / (q - 1) * f_prev;
      f_prev = f_cur;
      f_cur = f_next;
    }
    density[k] = (r == 0) ? 1.0 : f_cur;
  }
  return surface::integrate(geom, density);
}

double enclosed_volume(const VariationSpec& spec, double t) {
  if (!spec.model.volume_primitive)
    throw UnsupportedModelError("enclosed_volume: model has no volume primitive");
  const auto& grid = spec.grid;
  const double base = spec.model.volume_primitive(0.0);
  Field cells(spec.u.size());
  for (int i = 0; i < grid.n0; ++i) {
    const double density = grid.fiber_sqrt_det(i) * grid.h0 * grid.h1;
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      cells[k] = (spec.model.volume_primitive(spec.u[k] + t * spec.w[k]) - base) * density;
    }
  }
  return surface::compensated_sum(cells);
}

double balance_of_volume(const VariationSpec& spec, double t) {
  const double h = spec.h_t;
  const auto vol = [&](double s) { return enclosed_volume(spec, s); };
  const double rate =
      (-vol(t + 2 * h) + 8 * vol(t + h) - 8 * vol(t - h) + vol(t - 2 * h)) / (12 * h);
  const Evolved ev = evolve(spec, t);
  return std::abs(rate - surface::integrate(ev.geom, ev.f));
}

FirstVariationReport first_variation_check(const VariationSpec& spec, int r) {
  check_order(spec.model, r, "first_variation_check");
  const double c = require_c(spec.model, "first_variation_check");
  const double h = spec.h_t;
  const Evolved base = evolve(spec, 0.0);
  const Evolved em2 = evolve(spec, -2 * h), em1 = evolve(spec, -h);
  const Evolved ep1 = evolve(spec, h), ep2 = evolve(spec, 2 * h);

  FirstVariationReport rep;
  const double a_m2 = r_area(em2.geom, r), a_m1 = r_area(em1.geom, r);
  const double a_p1 = r_area(ep1.geom, r), a_p2 = r_area(ep2.geom, r);
  rep.fd = (-a_p2 + 8 * a_p1 - 8 * a_m1 + a_m2) / (12 * h);
  rep.fd_coarse = (a_p2 - a_m2) / (4 * h);

  const double sign = (r % 2 == 0) ? -1.0 : 1.0;  // carries (-1)^{r+1}
  const double cr = cr_constant(spec.model.n, r, c);
  Field density(base.f.size());
  for (std::size_t k = 0; k < base.f.size(); ++k)
    density[k] = (sign * (r + 1) * base.geom.node[k].pack.S[r + 1] + cr) * base.f[k];
  rep.formula = surface::integrate(base.geom, density);
  rep.residual = std::abs(rep.fd - rep.formula);

  // Pointwise evolution law for S_{r+1}.
  const Field s_m2 = s_field(em2.geom, r + 1), s_m1 = s_field(em1.geom, r + 1);
  const Field s_p1 = s_field(ep1.geom, r + 1), s_p2 = s_field(ep2.geom, r + 1);
  const Field lrf = calculus::lr_divergence_form(base.geom, r, base.f);
  const Field s_base = s_field(base.geom, r + 1);
  const auto grad_s = calculus::gradient(base.geom, s_base);
  double worst = 0.0, sq = 0.0, area = 0.0;
  for (std::size_t k = 0; k < base.f.size(); ++k) {
    const double dsdt = (-s_p2[k] + 8 * s_p1[k] - 8 * s_m1[k] + s_m2[k]) / (12 * h);
    const auto& node = base.geom.node[k];
    const double reaction = (c * node.pack.trP[r] - node.pack.trA2P[r]) * base.f[k];
    const double tangential = -spec.w[k] * node.du.dot(grad_s.v[k]);
    const double rhs = sign * (lrf[k] + reaction) + tangential;
    const double defect = std::abs(dsdt - rhs);
    worst = std::max(worst, defect);
    sq += defect * defect * node.weight;
    area += node.weight;
  }
  rep.evolution_residual = worst;
  rep.evolution_residual_l2 = std::sqrt(sq / area);
  rep.balance_residual = balance_of_volume(spec, 0.0);
  return rep;
}

FunctionalSeries jacobi_series(const VariationSpec& spec, int r) {
  check_order(spec.model, r, "jacobi_series");
  const double c = require_c(spec.model, "jacobi_series");
  const Evolved base = evolve(spec, 0.0);

  const Field h_next = [&] {
    Field f(base.f.size());
    for (std::size_t k = 0; k < base.f.size(); ++k)
      f[k] = base.geom.node[k].pack.H[r + 1];
    return f;
  }();
  const double mean = surface::integrate(base.geom, h_next) / base.geom.area;
  double dev = 0.0;
  for (double v : h_next) dev = std::max(dev, std::abs(v - mean));
  const double h_grid = base.geom.grid.h();
  const double tol = std::max(1e-6, 5.0 * h_grid * h_grid * (1.0 + std::abs(mean)));
  if (dev > tol)
    throw PreconditionError(
        "jacobi_series: base surface does not have constant H_{r+1} (deviation " +
        std::to_string(dev) + ")");

  FunctionalSeries series;
  series.c_r = cr_constant(spec.model.n, r, c);
  series.mean_h_next = mean;
  series.lambda = series.c_r + curvalg::b_const(spec.model.n, r) * mean;
  for (int i = 0; i < 5; ++i) {
    const double t = (i - 2) * spec.h_t;
    series.t[i] = t;
    const Evolved ev = (i == 2) ? base : evolve(spec, t);
    series.area_r[i] = r_area(ev.geom, r);
    series.volume[i] = enclosed_volume(spec, t);
    series.jacobi[i] = series.area_r[i] - series.lambda * series.volume[i];
  }
  return series;
}

SecondVariationReport second_variation_check(const VariationSpec& spec, int r) {
  const double c = require_c(spec.model, "second_variation_check");
  const FunctionalSeries series = jacobi_series(spec, r);
  const double h = spec.h_t;
  SecondVariationReport rep;
  rep.fd = (-series.jacobi[0] + 16 * series.jacobi[1] - 30 * series.jacobi[2] +
            16 * series.jacobi[3] - series.jacobi[4]) /
           (12 * h * h);

  const Evolved base = evolve(spec, 0.0);
  const Field lrf = calculus::lr_divergence_form(base.geom, r, base.f);
  Field direct(base.f.size()), reaction(base.f.size());
  for (std::size_t k = 0; k < base.f.size(); ++k) {
    const auto& node = base.geom.node[k];
    reaction[k] = (c * node.pack.trP[r] - node.pack.trA2P[r]) * base.f[k] * base.f[k];
    direct[k] = lrf[k] * base.f[k] + reaction[k];
  }
  rep.direct = (r + 1) * surface::integrate(base.geom, direct);
  rep.bilinear = (r + 1) * (-calculus::dirichlet_form(base.geom, r, base.f, base.f) +
                            surface::integrate(base.geom, reaction));
  rep.max_spread = std::max({std::abs(rep.fd - rep.direct),
                             std::abs(rep.fd - rep.bilinear),
                             std::abs(rep.direct - rep.bilinear)});
  return rep;
}

}  // namespace rstab::variation
