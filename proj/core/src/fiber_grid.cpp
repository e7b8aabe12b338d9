// SPDX-License-Identifier: MIT
#include "rstab/fiber_grid.hpp"

#include <cmath>

namespace rstab::surface {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxNodes = 1 << 20;
}  // namespace

FiberGrid::ResolvedNode FiberGrid::resolve(int i, int j, PoleParity p) const {
  j = ((j % n1) + n1) % n1;
  double sign = 1.0;
  if (kind == GridKind::TorusPeriodic) {
    i = ((i % n0) + n0) % n0;
  } else {
    // Reflect across a pole: the point (-theta, phi) is (theta, phi + pi),
    // so ghost rows read the antipodal column, with a flip for odd fields.
    if (i < 0) {
      i = -1 - i;
      j = (j + n1 / 2) % n1;
      if (p == PoleParity::Odd) sign = -1.0;
    } else if (i >= n0) {
      i = 2 * n0 - 1 - i;
      j = (j + n1 / 2) % n1;
      if (p == PoleParity::Odd) sign = -1.0;
    }
  }
  return {idx(i, j), sign};
}

double FiberGrid::at(const Field& f, int i, int j, PoleParity p) const {
  const ResolvedNode r = resolve(i, j, p);
  return r.sign * f[static_cast<std::size_t>(r.k)];
}

double FiberGrid::d0(const Field& f, int i, int j, PoleParity p) const {
  return (at(f, i + 1, j, p) - at(f, i - 1, j, p)) / (2.0 * h0);
}

double FiberGrid::d1(const Field& f, int i, int j, PoleParity p) const {
  return (at(f, i, j + 1, p) - at(f, i, j - 1, p)) / (2.0 * h1);
}

double FiberGrid::d00(const Field& f, int i, int j, PoleParity p) const {
  return (at(f, i + 1, j, p) - 2.0 * at(f, i, j, p) + at(f, i - 1, j, p)) / (h0 * h0);
}

double FiberGrid::d11(const Field& f, int i, int j, PoleParity p) const {
  return (at(f, i, j + 1, p) - 2.0 * at(f, i, j, p) + at(f, i, j - 1, p)) / (h1 * h1);
}

double FiberGrid::d01(const Field& f, int i, int j, PoleParity p) const {
  return (at(f, i + 1, j + 1, p) - at(f, i + 1, j - 1, p) -
          at(f, i - 1, j + 1, p) + at(f, i - 1, j - 1, p)) /
         (4.0 * h0 * h1);
}

double FiberGrid::d0w(const Field& f, int i, int j, PoleParity p) const {
  return (-at(f, i + 2, j, p) + 8.0 * at(f, i + 1, j, p) -
          8.0 * at(f, i - 1, j, p) + at(f, i - 2, j, p)) /
         (12.0 * h0);
}

double FiberGrid::d1w(const Field& f, int i, int j, PoleParity p) const {
  return (-at(f, i, j + 2, p) + 8.0 * at(f, i, j + 1, p) -
          8.0 * at(f, i, j - 1, p) + at(f, i, j - 2, p)) /
         (12.0 * h1);
}

double FiberGrid::d00w(const Field& f, int i, int j, PoleParity p) const {
  return (-at(f, i + 2, j, p) + 16.0 * at(f, i + 1, j, p) - 30.0 * at(f, i, j, p) +
          16.0 * at(f, i - 1, j, p) - at(f, i - 2, j, p)) /
         (12.0 * h0 * h0);
}

double FiberGrid::d11w(const Field& f, int i, int j, PoleParity p) const {
  return (-at(f, i, j + 2, p) + 16.0 * at(f, i, j + 1, p) - 30.0 * at(f, i, j, p) +
          16.0 * at(f, i, j - 1, p) - at(f, i, j - 2, p)) /
         (12.0 * h1 * h1);
}

double FiberGrid::d01w(const Field& f, int i, int j, PoleParity p) const {
  // Composition of the two five-point first-derivative stencils.
  static const int off[4] = {2, 1, -1, -2};
  static const double cf[4] = {-1.0, 8.0, -8.0, 1.0};
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      acc += cf[a] * cf[b] * at(f, i + off[a], j + off[b], p);
  return acc / (144.0 * h0 * h1);
}

Field FiberGrid::deriv0(const Field& f, PoleParity p) const {
  Field out(static_cast<std::size_t>(nodes()));
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) out[idx(i, j)] = d0(f, i, j, p);
  return out;
}

Field FiberGrid::deriv1(const Field& f, PoleParity p) const {
  Field out(static_cast<std::size_t>(nodes()));
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) out[idx(i, j)] = d1(f, i, j, p);
  return out;
}

Field FiberGrid::deriv0w(const Field& f, PoleParity p) const {
  Field out(static_cast<std::size_t>(nodes()));
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) out[idx(i, j)] = d0w(f, i, j, p);
  return out;
}

Field FiberGrid::deriv1w(const Field& f, PoleParity p) const {
  Field out(static_cast<std::size_t>(nodes()));
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) out[idx(i, j)] = d1w(f, i, j, p);
  return out;
}

Eigen::Matrix2d FiberGrid::fiber_metric(int i) const {
  Eigen::Matrix2d g = Eigen::Matrix2d::Identity();
  if (kind == GridKind::SphereLatLong) {
    const double s = std::sin(c0[i]);
    g(1, 1) = s * s;
  }
  return g;
}

double FiberGrid::fiber_sqrt_det(int i) const {
  return kind == GridKind::SphereLatLong ? std::sin(c0[i]) : 1.0;
}

FiberGrid build_fiber_grid(const spacetime::GRWModel& model, int res0, int res1) {
  if (model.n != 2)
    throw UnsupportedModelError("build_fiber_grid: only 2-dimensional fibers are gridded");
  if (res0 < 4 || res1 < 4)
    throw DiscretizationError("build_fiber_grid: need at least 4 nodes per axis");
  if (static_cast<long>(res0) * res1 > kMaxNodes)
    throw CapacityError("build_fiber_grid: grid exceeds the node budget");
  FiberGrid g;
  g.n0 = res0;
  g.n1 = res1;
  if (model.fiber == spacetime::FiberKind::Sphere) {
    if (res1 % 2 != 0)
      throw DiscretizationError(
          "build_fiber_grid: sphere grids need an even column count for the pole shift");
    g.kind = GridKind::SphereLatLong;
    g.h0 = kPi / res0;
    g.h1 = 2.0 * kPi / res1;
    g.c0.resize(res0);
    g.c1.resize(res1);
    for (int i = 0; i < res0; ++i) g.c0[i] = (i + 0.5) * g.h0;
    for (int j = 0; j < res1; ++j) g.c1[j] = j * g.h1;
  } else {
    g.kind = GridKind::TorusPeriodic;
    g.h0 = 2.0 * kPi / res0;
    g.h1 = 2.0 * kPi / res1;
    g.c0.resize(res0);
    g.c1.resize(res1);
    for (int i = 0; i < res0; ++i) g.c0[i] = i * g.h0;
    for (int j = 0; j < res1; ++j) g.c1[j] = j * g.h1;
  }
  return g;
}

double compensated_sum(const Field& values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double weighted_sum(const Field& values, const Field& weights) {
  if (values.size() != weights.size())
    throw std::invalid_argument("weighted_sum: size mismatch");
  double sum = 0.0, carry = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double y = values[k] * weights[k] - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double fiber_area(const FiberGrid& grid) {
  Field density(static_cast<std::size_t>(grid.nodes()));
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j)
      density[grid.idx(i, j)] = grid.fiber_sqrt_det(i) * grid.h0 * grid.h1;
  return compensated_sum(density);
}

}  // namespace rstab::surface
