// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rstab::curvalg {

// Exact binomial coefficient, returned as a double.
double binomial(int n, int k);

// b_r = (n-r) C(n,r). The alternative form (r+1) C(n,r+1) is the same
// integer; both are computed and cross-checked.
double b_const(int n, int r);

// Elementary symmetric polynomial S_r of the given values, 0 <= r <= n.
double elem_sym(const Eigen::VectorXd& values, int r);

// A symmetric operator sample in dimension n with its eigenvalues
// (principal curvatures), ascending.
struct ShapeSample {
  int n = 0;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;

  static ShapeSample from_matrix(const Eigen::MatrixXd& a);
  static ShapeSample from_eigenvalues(const Eigen::VectorXd& values);
  // Random symmetric sample with eigenvalues in [-2, 2], conjugated by a
  // random rotation. Deterministic in the seed.
  static ShapeSample random(int n, std::uint64_t seed);
};

// Scalar curvature ladder of one sample, indexed by r = 0..n (b by 0..n-1):
//   H_r         = (-1)^r S_r / C(n,r)
//   tr(P_r)     = (-1)^r (n-r) S_r
//   tr(A P_r)   = (-1)^r (r+1) S_{r+1}
//   tr(A^2 P_r) = (-1)^r (S_1 S_{r+1} - (r+2) S_{r+2})
// with S_{n+1} = S_{n+2} = 0.
struct CurvaturePack {
  int n = 0;
  std::vector<double> S, H, trP, trAP, trA2P, b;
};

CurvaturePack curvature_pack(const ShapeSample& sample);

// Newton transformations P_0 = I, P_r = (-1)^r S_r I + A P_{r-1}, r <= n.
struct NewtonSequence {
  int n = 0;
  std::vector<Eigen::MatrixXd> P;
};

NewtonSequence newton_seq(const ShapeSample& sample);

// P_r entrywise from the generalized Kronecker symbol expansion
//   (P_r)_ij = ((-1)^r / r!) sum delta^{j_1..j_r j}_{i_1..i_r i}
//              a_{j_1 i_1} ... a_{j_r i_r}.
// Factorial cost; guarded to n <= 6.
Eigen::MatrixXd newton_reilly(const ShapeSample& sample, int r);

// Residuals of the trace identities, each scaled by 1 + |target|, plus
// the Cayley-Hamilton tail |P_n| (scaled by 1 + |A|_inf^n) and the gap
// between the two closed forms of b_r.
struct TraceResiduals {
  std::vector<double> trP, trAP, trA2P;
  double cayley_hamilton = 0.0;
  double b_gap = 0.0;
  double max() const;
};

TraceResiduals trace_identity_residuals(const ShapeSample& sample);

}  // namespace rstab::curvalg
