// SPDX-License-Identifier: MIT
#include "rstab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rstab::surface {

namespace {

// Spacelike margin: phi(u)^2 - |grad u|^2 must exceed this at every node.
constexpr double kSpacelikeFloor = 1e-10;

Eigen::VectorXd mink_flip(const Eigen::VectorXd& v) {
  Eigen::VectorXd w = v;
  w[w.size() - 1] = -w[w.size() - 1];
  return w;
}

// Weight of the five-point stencil in a geometry derivative. The metric
// inverse and the orthonormal frame divide first derivatives by up to
// sin(theta)^2, so pole-adjacent rows need the five-point stencil's two
// extra orders; in the bulk the compact stencil already delivers clean
// second order. The blend is quintic in sin(theta), hence C^2: these
// derivatives feed fields that are differentiated again downstream, and
// a kink in the truncation-error profile would cost an order there.
double wide_weight(double sin_theta) {
  constexpr double kLo = 0.35, kHi = 0.65;
  const double t = std::clamp((kHi - sin_theta) / (kHi - kLo), 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// First derivative of a geometry input field along the given axis.
Field geom_deriv(const FiberGrid& grid, const Field& f, int axis) {
  Field out(static_cast<std::size_t>(grid.nodes()));
  for (int i = 0; i < grid.n0; ++i) {
    const double w = grid.kind == GridKind::SphereLatLong
                         ? wide_weight(std::sin(grid.c0[i]))
                         : 0.0;
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      double v = 0.0;
      if (w > 0.0) {
        v += w * (axis == 0 ? grid.d0w(f, i, j, PoleParity::Even)
                            : grid.d1w(f, i, j, PoleParity::Even));
      }
      if (w < 1.0) {
        v += (1.0 - w) * (axis == 0 ? grid.d0(f, i, j, PoleParity::Even)
                                    : grid.d1(f, i, j, PoleParity::Even));
      }
      out[k] = v;
    }
  }
  return out;
}

}  // namespace

double lorentz_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.size());
  return a.dot(b) - 2.0 * a[m - 1] * b[m - 1];
}

SurfaceGeometry embed_graph(const spacetime::GRWModel& model, const FiberGrid& grid,
                            const GraphFunction& graph) {
  if (model.n != 2)
    throw UnsupportedModelError("embed_graph: only 2-dimensional fibers are supported");
  const bool sphere = model.fiber == spacetime::FiberKind::Sphere;
  if (sphere != (grid.kind == GridKind::SphereLatLong))
    throw UnsupportedModelError("embed_graph: grid kind does not match the model fiber");
  const int count = grid.nodes();
  if (static_cast<int>(graph.u.size()) != count)
    throw std::invalid_argument("embed_graph: graph size does not match the grid");

  SurfaceGeometry geom;
  geom.model = model;
  geom.grid = grid;
  geom.u = graph.u;
  geom.ambient_dim = sphere ? 4 : 3;

  const Field du0 = geom_deriv(grid, graph.u, 0);
  const Field du1 = geom_deriv(grid, graph.u, 1);

  // Spacelike graphs need phi(u)^2 > |grad u|^2 in the fiber metric.
  std::vector<int> offenders;
  for (int i = 0; i < grid.n0; ++i) {
    const Eigen::Matrix2d ghat = grid.fiber_metric(i);
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      const double phi = model.warping.phi(graph.u[k]);
      const double grad2 =
          du0[k] * du0[k] / ghat(0, 0) + du1[k] * du1[k] / ghat(1, 1);
      if (phi * phi - grad2 <= kSpacelikeFloor) offenders.push_back(k);
    }
  }
  if (!offenders.empty()) {
    std::ostringstream msg;
    msg << "embed_graph: graph is not spacelike at " << offenders.size() << " node(s):";
    for (std::size_t k = 0; k < offenders.size() && k < 16; ++k) msg << ' ' << offenders[k];
    throw SpacelikeViolation(msg.str(), offenders);
  }

  geom.position.resize(count);
  geom.normal.resize(count);
  geom.tangent0.resize(count);
  geom.tangent1.resize(count);
  geom.node.resize(count);

  std::vector<Eigen::VectorXd> dsdir(count);
  for (int i = 0; i < grid.n0; ++i) {
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      const double uu = graph.u[k];
      Eigen::VectorXd p(geom.ambient_dim), x0(geom.ambient_dim), x1(geom.ambient_dim),
          ds(geom.ambient_dim), nu(geom.ambient_dim);
      if (sphere) {
        const double th = grid.c0[i], ph = grid.c1[j];
        const Eigen::Vector3d q(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                std::cos(th));
        const Eigen::Vector3d qt(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph),
                                 -std::sin(th));
        const Eigen::Vector3d qp(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph),
                                 0.0);
        const double ch = std::cosh(uu), sh = std::sinh(uu);
        p << ch * q, sh;
        x0 << ch * qt + sh * du0[k] * q, ch * du0[k];
        x1 << ch * qp + sh * du1[k] * q, ch * du1[k];
        ds << sh * q, ch;
        // Unit normal from the Minkowski-orthogonality kernel.
        Eigen::MatrixXd constraints(3, 4);
        constraints.row(0) = mink_flip(p);
        constraints.row(1) = mink_flip(x0);
        constraints.row(2) = mink_flip(x1);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints);
        const Eigen::MatrixXd kern = lu.kernel();
        if (kern.cols() < 1)
          throw DiscretizationError("embed_graph: degenerate tangent plane");
        nu = kern.col(0);
      } else {
        const double x = grid.c0[i], y = grid.c1[j];
        p << x, y, uu;
        x0 << 1.0, 0.0, du0[k];
        x1 << 0.0, 1.0, du1[k];
        ds << 0.0, 0.0, 1.0;
        nu.resize(3);
        nu << du0[k], du1[k], 1.0;
      }
      const double norm2 = -lorentz_dot(nu, nu);
      if (norm2 <= 0.0)
        throw DiscretizationError("embed_graph: normal direction is not timelike");
      nu /= std::sqrt(norm2);
      if (-lorentz_dot(nu, ds) < 0.0) nu = -nu;

      geom.position[k] = p;
      geom.tangent0[k] = x0;
      geom.tangent1[k] = x1;
      geom.normal[k] = nu;
      dsdir[k] = ds;
    }
  }

  // Normal component fields, for the shape operator stencils.
  std::vector<Field> ncomp(geom.ambient_dim, Field(count));
  for (int k = 0; k < count; ++k)
    for (int d = 0; d < geom.ambient_dim; ++d) ncomp[d][k] = geom.normal[k][d];
  std::vector<Field> dn0(geom.ambient_dim), dn1(geom.ambient_dim);
  for (int d = 0; d < geom.ambient_dim; ++d) {
    dn0[d] = geom_deriv(grid, ncomp[d], 0);
    dn1[d] = geom_deriv(grid, ncomp[d], 1);
  }

  Field weights(count);
  GeometryQuality quality;
  for (int i = 0; i < grid.n0; ++i) {
    const Eigen::Matrix2d ghat = grid.fiber_metric(i);
    for (int j = 0; j < grid.n1; ++j) {
      const int k = grid.idx(i, j);
      NodeGeometry& node = geom.node[k];
      node.du << du0[k], du1[k];

      node.g(0, 0) = lorentz_dot(geom.tangent0[k], geom.tangent0[k]);
      node.g(0, 1) = lorentz_dot(geom.tangent0[k], geom.tangent1[k]);
      node.g(1, 0) = node.g(0, 1);
      node.g(1, 1) = lorentz_dot(geom.tangent1[k], geom.tangent1[k]);
      const double det = node.g.determinant();
      if (det <= 0.0 || node.g(0, 0) <= 0.0)
        throw DiscretizationError("embed_graph: induced metric is not positive definite");
      node.g_inv = node.g.inverse();
      node.sqrt_det_g = std::sqrt(det);

      const double phi = model.warping.phi(geom.u[k]);
      node.cosh_theta = -lorentz_dot(geom.normal[k], dsdir[k]);
      const double grad2 =
          du0[k] * du0[k] / ghat(0, 0) + du1[k] * du1[k] / ghat(1, 1);
      quality.max_cosh_mismatch =
          std::max(quality.max_cosh_mismatch,
                   std::abs(node.cosh_theta - phi / std::sqrt(phi * phi - grad2)));
      quality.max_normal_residual = std::max(
          {quality.max_normal_residual,
           std::abs(lorentz_dot(geom.normal[k], geom.tangent0[k])),
           std::abs(lorentz_dot(geom.normal[k], geom.tangent1[k])),
           std::abs(lorentz_dot(geom.normal[k], geom.normal[k]) + 1.0)});

      Eigen::VectorXd dn0k(geom.ambient_dim), dn1k(geom.ambient_dim);
      for (int d = 0; d < geom.ambient_dim; ++d) {
        dn0k[d] = dn0[d][k];
        dn1k[d] = dn1[d][k];
      }
      Eigen::Matrix2d b;
      b(0, 0) = -lorentz_dot(dn0k, geom.tangent0[k]);
      b(0, 1) = -lorentz_dot(dn0k, geom.tangent1[k]);
      b(1, 0) = -lorentz_dot(dn1k, geom.tangent0[k]);
      b(1, 1) = -lorentz_dot(dn1k, geom.tangent1[k]);
      quality.max_b_asymmetry =
          std::max(quality.max_b_asymmetry, std::abs(b(0, 1) - b(1, 0)));
      const Eigen::Matrix2d bs = 0.5 * (b + b.transpose());

      // g-orthonormal frame by Gram-Schmidt on the coordinate tangents.
      const double s00 = std::sqrt(node.g(0, 0));
      const double s11 = std::sqrt(det / node.g(0, 0));
      node.frame << 1.0 / s00, -node.g(0, 1) / (node.g(0, 0) * s11), 0.0, 1.0 / s11;
      Eigen::Matrix2d af = node.frame.transpose() * bs * node.frame;
      node.a_frame = 0.5 * (af + af.transpose());
      node.a_coord = node.frame * node.a_frame * node.frame.inverse();

      const auto sample = curvalg::ShapeSample::from_matrix(node.a_frame);
      node.kappa << sample.eigenvalues[0], sample.eigenvalues[1];
      node.pack = curvalg::curvature_pack(sample);

      node.psi = model.warping.dphi(geom.u[k]);
      node.n_psi = model.warping.ddphi(geom.u[k]) * node.cosh_theta;
      node.eta = phi * lorentz_dot(dsdir[k], geom.normal[k]);
      node.weight = node.sqrt_det_g * grid.h0 * grid.h1;
      weights[k] = node.weight;
    }
  }
  geom.quality = quality;
  geom.area = compensated_sum(weights);
  return geom;
}

CurvatureFields pointwise_curvatures(const SurfaceGeometry& geom, int r) {
  if (r < 0 || r >= geom.model.n)
    throw std::domain_error("pointwise_curvatures: need 0 <= r <= n-1");
  const int count = geom.grid.nodes();
  CurvatureFields f;
  f.r = r;
  f.S.resize(count);
  f.H.resize(count);
  f.trP.resize(count);
  f.trA2P.resize(count);
  f.margin.resize(count);
  for (int k = 0; k < count; ++k) {
    const auto& node = geom.node[k];
    f.S[k] = node.pack.S[r];
    f.H[k] = node.pack.H[r];
    f.trP[k] = node.pack.trP[r];
    f.trA2P[k] = node.pack.trA2P[r];
    const double ddphi = geom.model.warping.ddphi(geom.u[k]);
    f.margin[k] =
        node.pack.H[r] * ddphi - std::max(node.pack.H[r + 1] * node.psi, 0.0);
  }
  return f;
}

double integrate(const SurfaceGeometry& geom, const Field& f) {
  if (f.size() != geom.node.size())
    throw std::invalid_argument("integrate: field size does not match the grid");
  Field weights(geom.node.size());
  for (std::size_t k = 0; k < geom.node.size(); ++k) weights[k] = geom.node[k].weight;
  return weighted_sum(f, weights);
}

}  // namespace rstab::surface
