// SPDX-License-Identifier: MIT
#include "rstab/curvalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rstab/types.hpp"

namespace rstab::curvalg {

namespace {

constexpr int kMaxDim = 16;
constexpr int kMaxReillyDim = 6;

// Uniform in [0, 1) from the top 53 bits, so the sequence depends only on
// the engine and not on library distribution internals.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int permutation_parity(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      if (p[a] > p[b]) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

double b_const(int n, int r) {
  if (r < 0 || r >= n) throw std::domain_error("b_const: need 0 <= r < n");
  const double lhs = (n - r) * binomial(n, r);
  const double rhs = (r + 1) * binomial(n, r + 1);
  if (lhs != rhs) throw std::logic_error("b_const: closed forms disagree");
  return rhs;
}

double elem_sym(const Eigen::VectorXd& values, int r) {
  const int n = static_cast<int>(values.size());
  if (r < 0 || r > n) throw std::domain_error("elem_sym: need 0 <= r <= n");
  std::vector<double> e(static_cast<std::size_t>(r) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int k = std::min(r, i + 1); k >= 1; --k) e[k] += values[i] * e[k - 1];
  return e[r];
}

ShapeSample ShapeSample::from_matrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("ShapeSample: matrix must be square");
  const int n = static_cast<int>(a.rows());
  if (n > kMaxDim) throw CapacityError("ShapeSample: dimension above 16");
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("ShapeSample: matrix is not symmetric");
  ShapeSample s;
  s.n = n;
  s.matrix = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix);
  s.eigenvalues = es.eigenvalues();
  return s;
}

ShapeSample ShapeSample::from_eigenvalues(const Eigen::VectorXd& values) {
  ShapeSample s;
  s.n = static_cast<int>(values.size());
  if (s.n < 1) throw std::invalid_argument("ShapeSample: empty eigenvalue list");
  if (s.n > kMaxDim) throw CapacityError("ShapeSample: dimension above 16");
  s.eigenvalues = values;
  std::sort(s.eigenvalues.data(), s.eigenvalues.data() + s.n);
  s.matrix = s.eigenvalues.asDiagonal();
  return s;
}

ShapeSample ShapeSample::random(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("ShapeSample: need n >= 1");
  if (n > kMaxDim) throw CapacityError("ShapeSample: dimension above 16");
  std::mt19937_64 rng(seed);
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = -2.0 + 4.0 * uniform01(rng);
  Eigen::MatrixXd gauss(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u1 = uniform01(rng), u2 = uniform01(rng);
      if (u1 < 1e-300) u1 = 1e-300;
      gauss(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (rmat(j, j) < 0) q.col(j) *= -1.0;
  Eigen::MatrixXd a = q * lambda.asDiagonal() * q.transpose();
  return from_matrix(0.5 * (a + a.transpose()));
}

CurvaturePack curvature_pack(const ShapeSample& sample) {
  const int n = sample.n;
  CurvaturePack pack;
  pack.n = n;
  // S_0..S_{n+2}, the two extra entries identically zero.
  std::vector<double> s(static_cast<std::size_t>(n) + 3, 0.0);
  for (int r = 0; r <= n; ++r) s[r] = elem_sym(sample.eigenvalues, r);
  pack.S.assign(s.begin(), s.begin() + n + 1);
  pack.H.resize(n + 1);
  pack.trP.resize(n + 1);
  pack.trAP.resize(n + 1);
  pack.trA2P.resize(n + 1);
  for (int r = 0; r <= n; ++r) {
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    pack.H[r] = sign * s[r] / binomial(n, r);
    pack.trP[r] = sign * (n - r) * s[r];
    pack.trAP[r] = sign * (r + 1) * s[r + 1];
    pack.trA2P[r] = sign * (s[1] * s[r + 1] - (r + 2) * s[r + 2]);
  }
  pack.b.resize(n);
  for (int r = 0; r < n; ++r) pack.b[r] = b_const(n, r);
  return pack;
}

NewtonSequence newton_seq(const ShapeSample& sample) {
  const int n = sample.n;
  NewtonSequence seq;
  seq.n = n;
  seq.P.resize(n + 1);
  seq.P[0] = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (int r = 1; r <= n; ++r) {
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    seq.P[r] = sign * elem_sym(sample.eigenvalues, r) * id + sample.matrix * seq.P[r - 1];
  }
  return seq;
}

Eigen::MatrixXd newton_reilly(const ShapeSample& sample, int r) {
  const int n = sample.n;
  if (r < 0 || r > n) throw std::domain_error("newton_reilly: need 0 <= r <= n");
  if (n > kMaxReillyDim)
    throw CapacityError("newton_reilly: factorial expansion guarded to n <= 6");
  const Eigen::MatrixXd& a = sample.matrix;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);

  std::vector<int> pool;     // candidate indices for the subset T
  std::vector<int> subset;   // chosen T, |T| = r
  for (int i = 0; i < n; ++i) {
    pool.clear();
    for (int k = 0; k < n; ++k)
      if (k != i) pool.push_back(k);
    // iterate over r-subsets of pool via combination mask positions
    std::vector<int> comb(r);
    for (int k = 0; k < r; ++k) comb[k] = k;
    const bool any = r <= static_cast<int>(pool.size());
    while (any) {
      subset.clear();
      for (int k = 0; k < r; ++k) subset.push_back(pool[comb[k]]);
      for (int j = 0; j < n; ++j) {
        // uppers and lowers must use the same index set T ∪ {i}
        const bool j_in = (j == i) || std::find(subset.begin(), subset.end(), j) != subset.end();
        if (!j_in) continue;
        std::vector<int> upper_pool;
        for (int t : subset) upper_pool.push_back(t);
        upper_pool.push_back(i);
        upper_pool.erase(std::find(upper_pool.begin(), upper_pool.end(), j));
        std::sort(upper_pool.begin(), upper_pool.end());

        std::vector<int> lower = subset;
        std::sort(lower.begin(), lower.end());
        do {
          std::vector<int> low_full = lower;
          low_full.push_back(i);
          std::vector<int> upper = upper_pool;
          do {
            std::vector<int> up_full = upper;
            up_full.push_back(j);
            // parity of the permutation carrying lowers to uppers
            std::vector<int> positions(up_full.size());
            for (std::size_t k = 0; k < up_full.size(); ++k)
              positions[k] = static_cast<int>(
                  std::find(low_full.begin(), low_full.end(), up_full[k]) - low_full.begin());
            double term = permutation_parity(positions);
            for (int k = 0; k < r; ++k) term *= a(up_full[k], low_full[k]);
            p(i, j) += term;
          } while (std::next_permutation(upper.begin(), upper.end()));
        } while (std::next_permutation(lower.begin(), lower.end()));
      }
      // next combination
      int k = r - 1;
      while (k >= 0 && comb[k] == static_cast<int>(pool.size()) - r + k) --k;
      if (k < 0) break;
      ++comb[k];
      for (int m = k + 1; m < r; ++m) comb[m] = comb[m - 1] + 1;
    }
  }
  double factor = (r % 2 == 0) ? 1.0 : -1.0;
  for (int k = 2; k <= r; ++k) factor /= k;
  return factor * p;
}

double TraceResiduals::max() const {
  double m = std::max(cayley_hamilton, b_gap);
  for (double v : trP) m = std::max(m, v);
  for (double v : trAP) m = std::max(m, v);
  for (double v : trA2P) m = std::max(m, v);
  return m;
}

TraceResiduals trace_identity_residuals(const ShapeSample& sample) {
  const int n = sample.n;
  const NewtonSequence seq = newton_seq(sample);
  const CurvaturePack pack = curvature_pack(sample);
  TraceResiduals res;
  res.trP.resize(n + 1);
  res.trAP.resize(n + 1);
  res.trA2P.resize(n + 1);
  const Eigen::MatrixXd a2 = sample.matrix * sample.matrix;
  for (int r = 0; r <= n; ++r) {
    const double t0 = seq.P[r].trace();
    const double t1 = (sample.matrix * seq.P[r]).trace();
    const double t2 = (a2 * seq.P[r]).trace();
    res.trP[r] = std::abs(t0 - pack.trP[r]) / (1.0 + std::abs(pack.trP[r]));
    res.trAP[r] = std::abs(t1 - pack.trAP[r]) / (1.0 + std::abs(pack.trAP[r]));
    res.trA2P[r] = std::abs(t2 - pack.trA2P[r]) / (1.0 + std::abs(pack.trA2P[r]));
  }
  const double anorm = sample.matrix.cwiseAbs().maxCoeff();
  res.cayley_hamilton =
      seq.P[n].cwiseAbs().maxCoeff() / (1.0 + std::pow(anorm, n));
  res.b_gap = 0.0;
  for (int r = 0; r < n; ++r) {
    const double lhs = (n - r) * binomial(n, r);
    const double rhs = (r + 1) * binomial(n, r + 1);
    res.b_gap = std::max(res.b_gap, std::abs(lhs - rhs));
  }
  return res;
}

}  // namespace rstab::curvalg
