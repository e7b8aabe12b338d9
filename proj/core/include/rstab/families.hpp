// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "rstab/fiber_grid.hpp"
#include "rstab/types.hpp"

namespace rstab::families {

// A family instance parsed from call syntax, e.g. "slice(0.69)",
// "slice_plus(0.69, 0.05, 2, 0)", "harmonic(2, 1, 0.3)".
struct FamilySpec {
  std::string name;
  std::vector<double> args;
};

// Parses name(arg, ...). Unknown names raise ManifestError carrying the
// nearest catalog name; arity and integer-mode checks happen later, in
// validate_family, where the role and grid are known.
FamilySpec parse_family(const std::string& text);

enum class FamilyRole { Surface, Variation };

struct FamilyInfo {
  std::string name;
  FamilyRole role = FamilyRole::Surface;
  std::vector<std::string> params;
  std::string grids;  // "any", "sphere", "torus"
  std::string summary;
  std::string example;
};

const std::vector<FamilyInfo>& catalog();

// Closest catalog name by edit distance, for diagnostics.
std::string nearest_family(const std::string& name);

// Throws ManifestError unless the spec names a catalog family of the
// given role, has the right arity, integer-valued mode indices, and is
// usable on the given grid kind.
void validate_family(const FamilySpec& spec, FamilyRole role, surface::GridKind kind);

// Height function u of a surface family on the grid.
Field surface_field(const surface::FiberGrid& grid, const FamilySpec& spec);

// Normal-speed test function f0 of a variation family on the grid.
Field variation_field(const surface::FiberGrid& grid, const FamilySpec& spec);

// Real orthonormal spherical harmonic: m = 0 the zonal branch, m > 0 the
// cos(m phi) branch, m < 0 the sin(|m| phi) branch.
double real_harmonic(int l, int m, double theta, double phi);

}  // namespace rstab::families
