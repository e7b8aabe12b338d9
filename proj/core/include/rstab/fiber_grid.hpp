// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include "rstab/spacetime.hpp"
#include "rstab/types.hpp"

namespace rstab::surface {

enum class GridKind { SphereLatLong, TorusPeriodic };

// Behavior of a node field across the sphere's polar ghost rows: plain
// continuation for scalars, a sign flip for anything carrying an odd
// number of theta indices (theta derivatives, the theta-phi metric entry,
// theta flux components). Irrelevant on the torus.
enum class PoleParity { Even, Odd };

// Cell-centered tensor grid on the fiber. Sphere rows exclude the poles:
// theta_i = (i + 1/2) pi / n0, phi_j = j 2pi / n1, and the ghost row
// behind a pole is the antipodal row, column-shifted by n1/2. Torus nodes
// are x_i = i 2pi / n0, y_j = j 2pi / n1, fully periodic.
struct FiberGrid {
  GridKind kind = GridKind::TorusPeriodic;
  int n0 = 0, n1 = 0;
  double h0 = 0.0, h1 = 0.0;
  std::vector<double> c0, c1;

  int nodes() const { return n0 * n1; }
  int idx(int i, int j) const { return i * n1 + j; }
  double h() const { return h0 > h1 ? h0 : h1; }

  // A logical (i, j) mapped to a stored node and the parity sign picked
  // up on the way; lets stencils be assembled as matrices.
  struct ResolvedNode {
    int k = 0;
    double sign = 1.0;
  };
  ResolvedNode resolve(int i, int j, PoleParity p) const;

  // Field value at logical row i, column j; rows beyond the boundary are
  // resolved through the pole reflection (sphere) or wrap (torus).
  double at(const Field& f, int i, int j, PoleParity p) const;

  // Second-order centered stencils at node (i, j).
  double d0(const Field& f, int i, int j, PoleParity p) const;
  double d1(const Field& f, int i, int j, PoleParity p) const;
  double d00(const Field& f, int i, int j, PoleParity p) const;
  double d11(const Field& f, int i, int j, PoleParity p) const;
  double d01(const Field& f, int i, int j, PoleParity p) const;

  // Fourth-order five-point variants. The latitude chart divides stencil
  // error by powers of sin(theta) near the poles, so max-norm second-order
  // accuracy there needs the extra two orders; ghost rows resolve up to
  // two deep through the pole reflection.
  double d0w(const Field& f, int i, int j, PoleParity p) const;
  double d1w(const Field& f, int i, int j, PoleParity p) const;
  double d00w(const Field& f, int i, int j, PoleParity p) const;
  double d11w(const Field& f, int i, int j, PoleParity p) const;
  double d01w(const Field& f, int i, int j, PoleParity p) const;

  // Whole-field derivatives along each axis.
  Field deriv0(const Field& f, PoleParity p) const;
  Field deriv1(const Field& f, PoleParity p) const;

  // Whole-field fourth-order variants; needed wherever the derivative is
  // later divided by sin(theta) factors, e.g. the shape operator.
  Field deriv0w(const Field& f, PoleParity p) const;
  Field deriv1w(const Field& f, PoleParity p) const;

  // Fiber metric ghat at row i and its area density.
  Eigen::Matrix2d fiber_metric(int i) const;
  double fiber_sqrt_det(int i) const;
};

FiberGrid build_fiber_grid(const spacetime::GRWModel& model, int res0, int res1);

// Compensated fixed-order sums over all nodes.
double compensated_sum(const Field& values);
double weighted_sum(const Field& values, const Field& weights);

// Quadrature of the fiber volume: sum of sqrt(det ghat) h0 h1.
double fiber_area(const FiberGrid& grid);

}  // namespace rstab::surface
