// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rstab {

// One scalar value per grid node, row-major over (row, column).
using Field = std::vector<double>;

// A graph left the spacelike regime: phi(u)^2 - |grad u|^2 must stay
// positive at every node. Carries the offending node indices.
class SpacelikeViolation : public std::runtime_error {
 public:
  SpacelikeViolation(const std::string& what, std::vector<int> offending)
      : std::runtime_error(what), nodes(std::move(offending)) {}
  std::vector<int> nodes;
};

// A stencil or grid invariant failed (degenerate metric, bad resolution).
class DiscretizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem size exceeds what the desk-scale algorithms are guarded for.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested ambient model is outside the supported catalog.
class UnsupportedModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A variational precondition does not hold on the supplied base surface.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Manifest parsing or validation failure; message carries the diagnostics.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rstab
