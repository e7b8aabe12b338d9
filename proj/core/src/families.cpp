// SPDX-License-Identifier: MIT
#include "rstab/families.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace rstab::families {

namespace {

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

// Classic two-row Levenshtein distance.
int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

const FamilyInfo* find_info(const std::string& name) {
  for (const auto& info : catalog())
    if (info.name == name) return &info;
  return nullptr;
}

[[noreturn]] void unknown_family(const std::string& name) {
  throw ManifestError("unknown family '" + name + "'; nearest is '" + nearest_family(name) +
                      "'");
}

int mode_index(const FamilySpec& spec, std::size_t arg, const char* what) {
  const double v = spec.args[arg];
  if (v != std::floor(v) || std::abs(v) > 64)
    throw ManifestError("family '" + spec.name + "': " + what + " must be a small integer, got " +
                        std::to_string(v));
  return static_cast<int>(v);
}

std::string role_word(FamilyRole role) {
  return role == FamilyRole::Surface ? "surface" : "variation";
}

std::string grid_word(surface::GridKind kind) {
  return kind == surface::GridKind::SphereLatLong ? "sphere" : "torus";
}

}  // namespace

const std::vector<FamilyInfo>& catalog() {
  static const std::vector<FamilyInfo> entries = {
      {"slice", FamilyRole::Surface, {"s0"}, "any", "constant-height slice u = s0",
       "slice(0.6931471805599453)"},
      {"slice_plus", FamilyRole::Surface, {"s0", "eps", "k0", "k1"}, "any",
       "slice plus eps times one mode: real harmonic (l, m) = (k0, k1) on the sphere, "
       "cos(k0 x + k1 y) on the torus",
       "slice_plus(0.6931471805599453, 0.05, 2, 0)"},
      {"const", FamilyRole::Variation, {"a"}, "any", "constant speed f0 = a", "const(1)"},
      {"harmonic", FamilyRole::Variation, {"l", "m", "a"}, "sphere",
       "f0 = a times the real harmonic Y(l, m); m < 0 is the sine branch",
       "harmonic(2, 0, 1)"},
      {"fourier", FamilyRole::Variation, {"kx", "ky", "a"}, "torus",
       "f0 = a cos(kx x + ky y)", "fourier(1, 2, 1)"},
  };
  return entries;
}

std::string nearest_family(const std::string& name) {
  const FamilyInfo* best = nullptr;
  int best_d = 1 << 20;
  for (const auto& info : catalog()) {
    const int d = edit_distance(name, info.name);
    if (d < best_d) {
      best_d = d;
      best = &info;
    }
  }
  return best ? best->name : "";
}

FamilySpec parse_family(const std::string& text) {
  const std::string s = strip(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw ManifestError("family spec '" + text + "' is not of the form name(arg, ...)");
  FamilySpec spec;
  spec.name = strip(s.substr(0, open));
  if (spec.name.empty() || !std::all_of(spec.name.begin(), spec.name.end(), is_name_char))
    throw ManifestError("family spec '" + text + "' has a malformed name");
  if (!find_info(spec.name)) unknown_family(spec.name);

  const std::string inner = strip(s.substr(open + 1, s.size() - open - 2));
  if (inner.empty()) return spec;
  std::stringstream ss(inner);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    piece = strip(piece);
    char* end = nullptr;
    const double v = std::strtod(piece.c_str(), &end);
    if (piece.empty() || end != piece.c_str() + piece.size())
      throw ManifestError("family '" + spec.name + "': argument '" + piece +
                          "' is not a number");
    spec.args.push_back(v);
  }
  return spec;
}

void validate_family(const FamilySpec& spec, FamilyRole role, surface::GridKind kind) {
  const FamilyInfo* info = find_info(spec.name);
  if (!info) unknown_family(spec.name);
  if (info->role != role)
    throw ManifestError("family '" + spec.name + "' is a " + role_word(info->role) +
                        " family, not a " + role_word(role) + " family");
  if (spec.args.size() != info->params.size()) {
    std::string sig = spec.name + "(";
    for (std::size_t i = 0; i < info->params.size(); ++i)
      sig += (i ? ", " : "") + info->params[i];
    sig += ")";
    throw ManifestError("family '" + spec.name + "' expects " +
                        std::to_string(info->params.size()) + " arguments as " + sig +
                        ", got " + std::to_string(spec.args.size()));
  }
  const std::string grid = grid_word(kind);
  if (info->grids != "any" && info->grids != grid)
    throw ManifestError("family '" + spec.name + "' needs a " + info->grids +
                        " grid, manifest uses a " + grid + " grid");

  if (spec.name == "slice_plus") {
    const int k0 = mode_index(spec, 2, "mode index k0");
    const int k1 = mode_index(spec, 3, "mode index k1");
    if (kind == surface::GridKind::SphereLatLong && (k0 < 0 || std::abs(k1) > k0))
      throw ManifestError("slice_plus: sphere mode needs l >= 0 and |m| <= l, got (" +
                          std::to_string(k0) + ", " + std::to_string(k1) + ")");
  } else if (spec.name == "harmonic") {
    const int l = mode_index(spec, 0, "degree l");
    const int m = mode_index(spec, 1, "order m");
    if (l < 0 || std::abs(m) > l)
      throw ManifestError("harmonic: needs l >= 0 and |m| <= l, got (" + std::to_string(l) +
                          ", " + std::to_string(m) + ")");
  } else if (spec.name == "fourier") {
    mode_index(spec, 0, "wave number kx");
    mode_index(spec, 1, "wave number ky");
  }
}

double real_harmonic(int l, int m, double theta, double phi) {
  if (m == 0) return std::sph_legendre(l, 0, theta);
  const int am = std::abs(m);
  const double base = std::numbers::sqrt2 * std::sph_legendre(l, am, theta);
  return m > 0 ? base * std::cos(am * phi) : base * std::sin(am * phi);
}

Field surface_field(const surface::FiberGrid& grid, const FamilySpec& spec) {
  validate_family(spec, FamilyRole::Surface, grid.kind);
  Field u(grid.nodes());
  if (spec.name == "slice") {
    std::fill(u.begin(), u.end(), spec.args[0]);
    return u;
  }
  // slice_plus
  const double s0 = spec.args[0], eps = spec.args[1];
  const int k0 = static_cast<int>(spec.args[2]), k1 = static_cast<int>(spec.args[3]);
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j) {
      const double bump = grid.kind == surface::GridKind::SphereLatLong
                              ? real_harmonic(k0, k1, grid.c0[i], grid.c1[j])
                              : std::cos(k0 * grid.c0[i] + k1 * grid.c1[j]);
      u[grid.idx(i, j)] = s0 + eps * bump;
    }
  return u;
}

Field variation_field(const surface::FiberGrid& grid, const FamilySpec& spec) {
  validate_family(spec, FamilyRole::Variation, grid.kind);
  Field f(grid.nodes());
  if (spec.name == "const") {
    std::fill(f.begin(), f.end(), spec.args[0]);
    return f;
  }
  if (spec.name == "harmonic") {
    const int l = static_cast<int>(spec.args[0]), m = static_cast<int>(spec.args[1]);
    const double a = spec.args[2];
    for (int i = 0; i < grid.n0; ++i)
      for (int j = 0; j < grid.n1; ++j)
        f[grid.idx(i, j)] = a * real_harmonic(l, m, grid.c0[i], grid.c1[j]);
    return f;
  }
  // fourier
  const int kx = static_cast<int>(spec.args[0]), ky = static_cast<int>(spec.args[1]);
  const double a = spec.args[2];
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j)
      f[grid.idx(i, j)] = a * std::cos(kx * grid.c0[i] + ky * grid.c1[j]);
  return f;
}

}  // namespace rstab::families
