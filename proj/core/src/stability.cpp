// SPDX-License-Identifier: MIT
#include "rstab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "rstab/calculus.hpp"
#include "rstab/curvalg.hpp"

namespace rstab::stability {

using surface::FiberGrid;
using surface::PoleParity;
using surface::SurfaceGeometry;

namespace {

// Dense assembly and eigensolve budget.
constexpr int kMaxSpectrumNodes = 4096;
constexpr double kDegeneratePhiPrime = 1e-8;

void check_order(const SurfaceGeometry& geom, int r, const char* who) {
  if (r < 0 || r > geom.model.n - 1)
    throw std::domain_error(std::string(who) + ": need 0 <= r <= n-1");
}

double require_c(const spacetime::GRWModel& model, const char* who) {
  if (!model.c)
    throw UnsupportedModelError(std::string(who) + ": model curvature is not constant");
  return *model.c;
}

}  // namespace

StabilityForm stability_form(const SurfaceGeometry& geom, int r) {
  check_order(geom, r, "stability_form");
  const double c = require_c(geom.model, "stability_form");
  const FiberGrid& grid = geom.grid;
  const int count = grid.nodes();
  if (count > kMaxSpectrumNodes)
    throw CapacityError("stability_form: dense assembly capped at 4096 nodes");

  const calculus::OperatorField p = calculus::newton_field(geom, r);
  StabilityForm form;
  form.r = r;
  form.c = c;
  form.q = Eigen::MatrixXd::Zero(count, count);
  form.w.resize(count);

  // Compact staggered finite-volume L_r. Cell-face fluxes of sqrt(g) P grad f
  // use the two-point difference across the face plus averaged tangential
  // derivatives; the two-point difference leaves no checkerboard null mode,
  // which a collocated centered gradient would. Faces touching a pole carry
  // the area density sin(0) = 0, so their flux is exactly zero.
  Field w00(count), w01(count), w11(count), reaction(count);
  for (int k = 0; k < count; ++k) {
    const auto& node = geom.node[k];
    form.w[k] = node.weight;
    const Eigen::Matrix2d pg = p.m[k] * node.g_inv;
    const Eigen::Matrix2d m = 0.5 * (pg + pg.transpose()) * node.sqrt_det_g;
    w00[k] = m(0, 0);
    w01[k] = m(0, 1);
    w11[k] = m(1, 1);
    reaction[k] = c * node.pack.trP[r] - node.pack.trA2P[r];
  }

  // Face coefficients and resolved neighbors; scalar ghosts continue
  // evenly, the theta-theta flux density oddly, the mixed one evenly.
  struct Cell {
    int up, dn, rt, lt;
    double c00p, c01p, c00m, c01m;
    double c11p, c10p, c11m, c10m;
  };
  std::vector<Cell> cell(count);
  const bool sphere = grid.kind == surface::GridKind::SphereLatLong;
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      Cell& e = cell[k];
      e.up = grid.resolve(i + 1, j, PoleParity::Even).k;
      e.dn = grid.resolve(i - 1, j, PoleParity::Even).k;
      e.rt = grid.resolve(i, j + 1, PoleParity::Even).k;
      e.lt = grid.resolve(i, j - 1, PoleParity::Even).k;
      e.c00p = 0.5 * (w00[k] + grid.at(w00, i + 1, j, PoleParity::Odd));
      e.c01p = 0.5 * (w01[k] + grid.at(w01, i + 1, j, PoleParity::Even));
      e.c00m = 0.5 * (w00[k] + grid.at(w00, i - 1, j, PoleParity::Odd));
      e.c01m = 0.5 * (w01[k] + grid.at(w01, i - 1, j, PoleParity::Even));
      e.c11p = 0.5 * (w11[k] + w11[e.rt]);
      e.c10p = 0.5 * (w01[k] + w01[e.rt]);
      e.c11m = 0.5 * (w11[k] + w11[e.lt]);
      e.c10m = 0.5 * (w01[k] + w01[e.lt]);
      if (sphere && i == 0) e.c00m = e.c01m = 0.0;
      if (sphere && i == grid.n0 - 1) e.c00p = e.c01p = 0.0;
    }

  const double rp1 = r + 1.0;
  Field f(count, 0.0);
  for (int b = 0; b < count; ++b) {
    f[b] = 1.0;
    const Field df0 = grid.deriv0(f, PoleParity::Even);
    const Field df1 = grid.deriv1(f, PoleParity::Even);
    for (int k = 0; k < count; ++k) {
      const Cell& e = cell[k];
      const double f0p = e.c00p * (f[e.up] - f[k]) / grid.h0 +
                         e.c01p * 0.5 * (df1[k] + df1[e.up]);
      const double f0m = e.c00m * (f[k] - f[e.dn]) / grid.h0 +
                         e.c01m * 0.5 * (df1[k] + df1[e.dn]);
      const double f1p = e.c11p * (f[e.rt] - f[k]) / grid.h1 +
                         e.c10p * 0.5 * (df0[k] + df0[e.rt]);
      const double f1m = e.c11m * (f[k] - f[e.lt]) / grid.h1 +
                         e.c10m * 0.5 * (df0[k] + df0[e.lt]);
      const double lf = (f0p - f0m) / grid.h0 + (f1p - f1m) / grid.h1;
      // weight/sqrt(g) = h0 h1, so the energy entry needs no division
      form.q(k, b) = rp1 * lf * grid.h0 * grid.h1;
    }
    form.q(b, b) += rp1 * reaction[b] * form.w[b];
    f[b] = 0.0;
  }

  // Exact symmetry for the eigensolver; the quadratic form is unchanged.
  form.q = 0.5 * (form.q + form.q.transpose()).eval();
  return form;
}

double evaluate(const StabilityForm& form, const Field& f) {
  if (static_cast<int>(f.size()) != form.q.rows())
    throw std::invalid_argument("evaluate: field size does not match the form");
  const Eigen::Map<const Eigen::VectorXd> v(f.data(), static_cast<long>(f.size()));
  return v.dot(form.q * v);
}

SpectrumReport stability_spectrum(const SurfaceGeometry& geom, int r, int n_eigen) {
  StabilityForm form = stability_form(geom, r);
  const int count = static_cast<int>(form.w.size());

  Eigen::VectorXd isqrt(count);
  for (int k = 0; k < count; ++k) isqrt[k] = 1.0 / std::sqrt(form.w[k]);
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b) form.q(a, b) *= isqrt[a] * isqrt[b];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form.q);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("stability_spectrum: eigensolver failed to converge");

  SpectrumReport report;
  report.r = r;
  const int keep = std::min(std::max(n_eigen, 1), count);
  report.eigenvalues.resize(keep);
  for (int q = 0; q < keep; ++q) report.eigenvalues[q] = solver.eigenvalues()[count - 1 - q];
  report.top = report.eigenvalues[0];

  report.top_eigenfunction.resize(count);
  Eigen::VectorXd vec = solver.eigenvectors().col(count - 1);
  int arg = 0;
  for (int k = 1; k < count; ++k)
    if (std::abs(vec[k] * isqrt[k]) > std::abs(vec[arg] * isqrt[arg])) arg = k;
  if (vec[arg] < 0.0) vec = -vec;
  for (int k = 0; k < count; ++k) report.top_eigenfunction[k] = vec[k] * isqrt[k];

  const double h = geom.grid.h();
  report.tol = 100.0 * h * h;
  if (report.top < -report.tol)
    report.verdict = Verdict::StronglyStable;
  else if (report.top <= report.tol)
    report.verdict = Verdict::Marginal;
  else
    report.verdict = Verdict::Unstable;
  return report;
}

SupportIdentityReport support_identity_residual(const SurfaceGeometry& geom, int r) {
  check_order(geom, r, "support_identity_residual");
  const double c = require_c(geom.model, "support_identity_residual");
  const int count = geom.grid.nodes();
  const double b = curvalg::b_const(geom.model.n, r);

  Field eta(count), h_next(count);
  for (int k = 0; k < count; ++k) {
    eta[k] = geom.node[k].eta;
    h_next[k] = geom.node[k].pack.H[r + 1];
  }
  const Field lhs = calculus::lr_divergence_form(geom, r, eta);
  const calculus::TangentField grad_h = calculus::gradient(geom, h_next);

  SupportIdentityReport report;
  report.r = r;
  for (int k = 0; k < count; ++k) {
    const auto& node = geom.node[k];
    const double phi = geom.model.warping.phi(geom.u[k]);
    const double t1 = node.pack.trA2P[r] * eta[k];
    const double t2 = -c * node.pack.trP[r] * eta[k];
    const double t3 = -b * node.pack.H[r] * node.n_psi;
    const double t4 = b * h_next[k] * node.psi;
    const double v_dot_grad = -phi * node.du.dot(grad_h.v[k]);
    const double t5 = b / (r + 1.0) * v_dot_grad;
    const double rhs = t1 + t2 + t3 + t4 + t5;
    report.max_residual = std::max(report.max_residual, std::abs(lhs[k] - rhs));
    report.scale = std::max(report.scale, std::abs(t1) + std::abs(t2) + std::abs(t3) +
                                              std::abs(t4) + std::abs(t5));
  }
  return report;
}

HypothesisMargins hypothesis_margins(const SurfaceGeometry& geom, int r) {
  check_order(geom, r, "hypothesis_margins");
  HypothesisMargins margins;
  margins.r = r;
  const surface::CurvatureFields fields = surface::pointwise_curvatures(geom, r);
  double theorem = fields.margin[0];
  double corollary = 0.0;
  int degenerate = 0;
  const int count = geom.grid.nodes();
  for (int k = 0; k < count; ++k) {
    theorem = std::min(theorem, fields.margin[k]);
    const double h_next = geom.node[k].pack.H[r + 1];
    const double gap = fields.H[k] - std::max(h_next, 0.0);
    corollary = (k == 0) ? gap : std::min(corollary, gap);
    if (std::abs(geom.node[k].psi) < kDegeneratePhiPrime) ++degenerate;
  }
  margins.theorem_margin = theorem;
  margins.corollary_margin = corollary;
  margins.degenerate_fraction = static_cast<double>(degenerate) / count;
  return margins;
}

std::vector<ProbeResult> theorem_probe(const spacetime::GRWModel& model,
                                       const FiberGrid& grid,
                                       const std::vector<ProbeCase>& cases, int r) {
  std::vector<ProbeResult> out;
  out.reserve(cases.size());
  for (const ProbeCase& probe : cases) {
    const SurfaceGeometry geom =
        surface::embed_graph(model, grid, surface::GraphFunction{probe.u});
    const SpectrumReport spectrum = stability_spectrum(geom, r);

    ProbeResult result;
    result.label = probe.label;
    result.r = r;
    result.verdict = spectrum.verdict;
    result.top = spectrum.top;
    result.tol = spectrum.tol;
    result.margins = hypothesis_margins(geom, r);

    double mean_u = 0.0;
    for (double v : probe.u) mean_u += v;
    mean_u /= static_cast<double>(probe.u.size());
    double flat = 0.0, h_next_max = 0.0;
    for (std::size_t k = 0; k < probe.u.size(); ++k) {
      flat = std::max(flat, std::abs(probe.u[k] - mean_u));
      h_next_max = std::max(h_next_max, std::abs(geom.node[k].pack.H[r + 1]));
    }
    const double h = grid.h();
    result.is_slice = flat <= 1e-10;
    // Tighter than the verdict band: the pointwise curvature is O(h^2)
    // accurate, and slices with H_{r+1} ~ 0.6 must not read as maximal.
    result.is_r_maximal = h_next_max <= 5.0 * h * h;
    result.hypothesis_met_strict = result.margins.theorem_margin > 0.0;

    const bool nondegenerate = result.margins.degenerate_fraction < 0.5;
    result.consistent = !(result.hypothesis_met_strict && nondegenerate &&
                          !result.is_slice && !result.is_r_maximal &&
                          result.verdict == Verdict::StronglyStable);
    out.push_back(std::move(result));
  }
  return out;
}

}  // namespace rstab::stability
