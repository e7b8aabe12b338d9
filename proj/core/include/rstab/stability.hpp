// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "rstab/surface.hpp"
#include "rstab/types.hpp"

namespace rstab::stability {

// Quadratic form of the second variation on normal speeds f:
//   Q_r(f) = (r+1) [ -B_r(f, f) + int (c tr P_r - tr A^2 P_r) f^2 dM ].
// Assembled once as a dense symmetric matrix pair (Q, W), W the diagonal
// of node area weights, so Q_r(f) = f^T Q f with the integral metric
// <f, g> = f^T W g.
struct StabilityForm {
  int r = 0;
  Eigen::MatrixXd q;          // symmetric form matrix
  Eigen::VectorXd w;          // node weights (area elements)
  double c = 0.0;
};

StabilityForm stability_form(const surface::SurfaceGeometry& geom, int r);

// Evaluate Q_r(f) through the assembled matrix.
double evaluate(const StabilityForm& form, const Field& f);

enum class Verdict { StronglyStable, Marginal, Unstable };

// Spectrum of Q_r relative to the integral metric: eigenvalues of
// W^{-1/2} Q W^{-1/2} in descending order, eigenfunctions normalized to
// int f^2 dM = 1 with the largest-magnitude entry positive. The verdict
// bands on the top eigenvalue use tol = 100 h^2:
//   top < -tol  StronglyStable,  |top| <= tol  Marginal,  else Unstable.
struct SpectrumReport {
  int r = 0;
  std::vector<double> eigenvalues;    // descending
  Field top_eigenfunction;
  double top = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::Marginal;
};

SpectrumReport stability_spectrum(const surface::SurfaceGeometry& geom, int r,
                                  int n_eigen = 8);

// Pointwise defect of the support function identity
//   L_r eta = tr(A^2 P_r) eta - c tr(P_r) eta - b_r H_r N(psi)
//             + b_r H_{r+1} psi + b_r/(r+1) <V, grad H_{r+1}>,
// with eta = <V, N>, psi = phi'(u), N(psi) = phi'' cosh theta and
// <V, grad H_{r+1}> = -phi(u) du . grad H_{r+1}.
struct SupportIdentityReport {
  int r = 0;
  double max_residual = 0.0;    // max node |lhs - rhs|
  double scale = 0.0;           // max node |rhs|, for relative reading
};

SupportIdentityReport support_identity_residual(const surface::SurfaceGeometry& geom,
                                                int r);

// Margins of the curvature hypothesis H_r phi'' >= max{H_{r+1} phi', 0}
// and of its constant-curvature corollary H_r >= max{H_{r+1}, 0}.
struct HypothesisMargins {
  int r = 0;
  double theorem_margin = 0.0;     // min node H_r phi'' - max{H_{r+1} phi', 0}
  double corollary_margin = 0.0;   // min node H_r - max{H_{r+1}, 0}
  double degenerate_fraction = 0.0;  // share of nodes with |phi'(u)| < 1e-8
};

HypothesisMargins hypothesis_margins(const surface::SurfaceGeometry& geom, int r);

// One closed surface to probe, by label and height function.
struct ProbeCase {
  std::string label;
  Field u;
};

// Per-surface probe outcome. The theorem predicts: a strongly r-stable
// closed surface satisfying the curvature hypothesis strictly, with
// phi' != 0 somewhere, is r-maximal or a slice. A probe is consistent
// unless it is a strict-hypothesis, nondegenerate, non-slice,
// non-r-maximal surface that still lands StronglyStable.
struct ProbeResult {
  std::string label;
  int r = 0;
  Verdict verdict = Verdict::Marginal;
  double top = 0.0, tol = 0.0;
  HypothesisMargins margins;
  bool hypothesis_met_strict = false;
  bool is_slice = false;
  bool is_r_maximal = false;
  bool consistent = true;
};

std::vector<ProbeResult> theorem_probe(const spacetime::GRWModel& model,
                                       const surface::FiberGrid& grid,
                                       const std::vector<ProbeCase>& cases, int r);

}  // namespace rstab::stability
