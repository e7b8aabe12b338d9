// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rstab::harness {

// On-disk copy of one fiber grid: coordinates, spacings, and the per-row
// area density. Everything a rebuild would produce, so a verified reload
// is bit-identical to rebuilding.
struct CachedGrid {
  std::string kind;  // "sphere" | "torus"
  int n0 = 0, n1 = 0;
  double h0 = 0.0, h1 = 0.0;
  std::vector<double> c0, c1, row_weight;
};

struct GridCacheResult {
  CachedGrid grid;
  std::string path;
  std::uint64_t hash = 0;     // FNV-1a over the payload bytes
  bool reused = false;        // verified file already present
  bool rebuilt_corrupt = false;  // file present but failed verification
};

// Builds or reloads the cache file for one grid spec inside dir. A file
// that fails the magic, size, or hash check is rebuilt in place and the
// corruption is flagged and logged to stderr.
GridCacheResult cache_grid(const std::string& kind, int res0, int res1,
                           const std::string& dir);

}  // namespace rstab::harness
