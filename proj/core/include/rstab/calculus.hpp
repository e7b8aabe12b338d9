// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include "rstab/surface.hpp"
#include "rstab/types.hpp"

namespace rstab::calculus {

// Contravariant tangent components per node.
struct TangentField {
  std::vector<Eigen::Vector2d> v;
};

// A (1,1)-tensor per node, coordinate components.
struct OperatorField {
  std::vector<Eigen::Matrix2d> m;
};

TangentField gradient(const surface::SurfaceGeometry& geom, const Field& f);

// Hessian as a (1,1)-tensor: g^{ik} (d_k d_j f - Gamma^l_{kj} d_l f).
OperatorField hessian(const surface::SurfaceGeometry& geom, const Field& f);

// Newton transformation P_r in coordinate components at every node,
// conjugated from the symmetric frame representation so that g P_r stays
// symmetric and the Dirichlet form below is symmetric in (f, g).
OperatorField newton_field(const surface::SurfaceGeometry& geom, int r);

// L_r f = tr(P_r Hess f), evaluated pointwise.
Field lr_trace_form(const surface::SurfaceGeometry& geom, int r, const Field& f);

// L_r f = div(P_r grad f) via the flux stencil
//   (1/sqrt g) d_i ( sqrt g (P_r)^i_j g^{jk} d_k f ).
Field lr_divergence_form(const surface::SurfaceGeometry& geom, int r, const Field& f);

// B_r(f, g) = integral of <P_r grad f, grad g> over the surface.
double dirichlet_form(const surface::SurfaceGeometry& geom, int r, const Field& f,
                      const Field& g);

}  // namespace rstab::calculus
