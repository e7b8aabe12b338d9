// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include "rstab/curvalg.hpp"
#include "rstab/fiber_grid.hpp"
#include "rstab/spacetime.hpp"
#include "rstab/types.hpp"

namespace rstab::surface {

// Graph height s = u(p) over the fiber grid, one value per node.
struct GraphFunction {
  Field u;
};

// Everything pointwise about the embedded graph at one node. The shape
// operator convention is A(X) = -(grad_X N)^T with N the future-pointing
// unit normal, so slices have A = -(phi'/phi) Id.
struct NodeGeometry {
  Eigen::Vector2d du;        // coordinate partials of u
  Eigen::Matrix2d g, g_inv;  // induced metric and inverse
  double sqrt_det_g = 0.0;
  Eigen::Matrix2d frame;     // columns: g-orthonormal tangent frame coefficients
  Eigen::Matrix2d a_frame;   // shape operator in that frame (symmetric)
  Eigen::Matrix2d a_coord;   // same operator in coordinate components
  Eigen::Vector2d kappa;     // principal curvatures, ascending
  double cosh_theta = 1.0;   // -<N, d/ds>
  double eta = 0.0;          // <V, N>, V = phi d/ds
  double psi = 0.0;          // phi'(u)
  double n_psi = 0.0;        // N(psi) = phi''(u) cosh theta
  double weight = 0.0;       // area element sqrt(det g) h0 h1
  curvalg::CurvaturePack pack;
};

// Numerical health of the embedding, all of it expected at roundoff or
// O(h^2) scale.
struct GeometryQuality {
  double max_normal_residual = 0.0;   // |<N,X_i>| and |<N,N>+1|
  double max_cosh_mismatch = 0.0;     // kernel normal vs closed form
  double max_b_asymmetry = 0.0;       // raw second fundamental form asymmetry
};

struct SurfaceGeometry {
  spacetime::GRWModel model;
  FiberGrid grid;
  Field u;
  int ambient_dim = 0;
  std::vector<Eigen::VectorXd> position, normal, tangent0, tangent1;
  std::vector<NodeGeometry> node;
  double area = 0.0;
  GeometryQuality quality;
};

// Minkowski product with the last coordinate timelike.
double lorentz_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

SurfaceGeometry embed_graph(const spacetime::GRWModel& model, const FiberGrid& grid,
                            const GraphFunction& graph);

// Pointwise fields of one curvature order r (0 <= r <= n-1), including
// the stability hypothesis margin H_r phi''(u) - max{H_{r+1} phi'(u), 0}.
struct CurvatureFields {
  int r = 0;
  Field S, H, trP, trA2P, margin;
};
CurvatureFields pointwise_curvatures(const SurfaceGeometry& geom, int r);

// Integral of f against the area measure, compensated fixed-order sum.
double integrate(const SurfaceGeometry& geom, const Field& f);

}  // namespace rstab::surface
