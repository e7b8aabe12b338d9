// SPDX-License-Identifier: MIT
#include "rstab/grid_cache.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rstab/fiber_grid.hpp"
#include "rstab/spacetime.hpp"
#include "rstab/types.hpp"

namespace rstab::harness {

namespace {

constexpr char kMagic[8] = {'R', 'S', 'T', 'A', 'B', 'G', 'R', 'D'};

std::uint64_t fnv1a(const std::vector<char>& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

void put_u32(std::vector<char>& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.insert(out.end(), buf, buf + 4);
}

void put_f64(std::vector<char>& out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.insert(out.end(), buf, buf + 8);
}

CachedGrid build(const std::string& kind, int res0, int res1) {
  // The grid geometry depends only on the fiber kind, so any model with
  // the right fiber serves as the builder argument.
  const auto model = kind == "sphere" ? spacetime::make_de_sitter(2)
                                      : spacetime::make_static_cylinder(2);
  const auto grid = surface::build_fiber_grid(model, res0, res1);
  CachedGrid out;
  out.kind = kind;
  out.n0 = grid.n0;
  out.n1 = grid.n1;
  out.h0 = grid.h0;
  out.h1 = grid.h1;
  out.c0 = grid.c0;
  out.c1 = grid.c1;
  out.row_weight.resize(grid.n0);
  for (int i = 0; i < grid.n0; ++i) out.row_weight[i] = grid.fiber_sqrt_det(i);
  return out;
}

std::vector<char> payload_bytes(const CachedGrid& g) {
  std::vector<char> out;
  put_u32(out, g.kind == "sphere" ? 0u : 1u);
  put_u32(out, static_cast<std::uint32_t>(g.n0));
  put_u32(out, static_cast<std::uint32_t>(g.n1));
  put_f64(out, g.h0);
  put_f64(out, g.h1);
  for (double v : g.c0) put_f64(out, v);
  for (double v : g.c1) put_f64(out, v);
  for (double v : g.row_weight) put_f64(out, v);
  return out;
}

bool verify_file(const std::string& path, const std::vector<char>& expected_payload,
                 std::uint64_t expected_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  std::uint64_t stored_hash = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&stored_hash), 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) return false;
  std::vector<char> payload(expected_payload.size());
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!in || in.peek() != std::ifstream::traits_type::eof()) return false;
  return stored_hash == expected_hash && fnv1a(payload) == expected_hash &&
         payload == expected_payload;
}

}  // namespace

GridCacheResult cache_grid(const std::string& kind, int res0, int res1,
                           const std::string& dir) {
  if (kind != "sphere" && kind != "torus")
    throw ManifestError("grid cache: kind must be 'sphere' or 'torus', got '" + kind + "'");
  if (res0 < 4 || res1 < 4)
    throw ManifestError("grid cache: resolutions must be at least 4x4");
  if (kind == "sphere" && res1 % 2 != 0)
    throw ManifestError("grid cache: sphere grids need an even column count");

  GridCacheResult result;
  result.grid = build(kind, res0, res1);
  const auto payload = payload_bytes(result.grid);
  result.hash = fnv1a(payload);

  std::filesystem::create_directories(dir);
  result.path = (std::filesystem::path(dir) /
                 ("grid_" + kind + "_" + std::to_string(res0) + "x" + std::to_string(res1) +
                  ".rsg"))
                    .string();

  if (std::filesystem::exists(result.path)) {
    if (verify_file(result.path, payload, result.hash)) {
      result.reused = true;
      return result;
    }
    result.rebuilt_corrupt = true;
    std::cerr << "warning: grid cache " << result.path << " corrupted, rebuilding\n";
  }

  std::ofstream out(result.path, std::ios::binary | std::ios::trunc);
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&result.hash), 8);
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw ManifestError("grid cache: cannot write " + result.path);
  return result;
}

}  // namespace rstab::harness
