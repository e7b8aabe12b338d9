// SPDX-License-Identifier: MIT
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rstab/families.hpp"
#include "rstab/grid_cache.hpp"
#include "rstab/manifest.hpp"
#include "rstab/runner.hpp"
#include "rstab/types.hpp"

namespace {

using namespace rstab;

// Exit codes: 0 all tasks pass, 1 a task failed or errored, 2 the
// manifest or command line is invalid.
constexpr int kExitInvalid = 2;

int cmd_run(const std::string& path, const std::string& out, long long seed, int jobs) {
  harness::ExperimentManifest m;
  try {
    m = harness::parse_manifest_file(path);
    if (!out.empty()) m.out_dir = out;
    if (seed >= 0) m.seed = static_cast<std::uint64_t>(seed);
    harness::validate_manifest(m);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rstab: invalid manifest: %s\n", e.what());
    return kExitInvalid;
  }
  const auto report = harness::run_manifest(m, jobs);
  harness::write_outputs(report, m, m.out_dir);
  for (const auto& rec : report.records) {
    std::string name = rec.task;
    if (rec.r >= 0) name += " (r=" + std::to_string(rec.r) + ")";
    std::printf("%-26s %s%s%s\n", name.c_str(), rec.status.c_str(),
                rec.detail.empty() ? "" : ": ", rec.detail.c_str());
  }
  std::printf("report: %s/report.json\n", m.out_dir.c_str());
  return report.exit_code;
}

int cmd_families() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& info : families::catalog()) {
    nlohmann::json j;
    j["name"] = info.name;
    j["role"] = info.role == families::FamilyRole::Surface ? "surface" : "variation";
    j["params"] = info.params;
    j["grids"] = info.grids;
    j["summary"] = info.summary;
    j["example"] = info.example;
    out.push_back(j);
  }
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int cmd_cache(const std::string& spec, const std::string& out) {
  // Grid spec syntax: kind:n0xn1, e.g. sphere:32x64.
  const auto colon = spec.find(':');
  const auto cross = spec.find('x', colon == std::string::npos ? 0 : colon);
  int n0 = 0, n1 = 0;
  if (colon == std::string::npos || cross == std::string::npos ||
      std::sscanf(spec.c_str() + colon + 1, "%dx%d", &n0, &n1) != 2) {
    std::fprintf(stderr, "rstab: bad grid spec '%s'; expected kind:n0xn1, e.g. sphere:32x64\n",
                 spec.c_str());
    return kExitInvalid;
  }
  try {
    const auto result =
        harness::cache_grid(spec.substr(0, colon), n0, n1, out.empty() ? "." : out);
    std::printf("%s %s hash=%016llx\n", result.reused ? "reused" : "built",
                result.path.c_str(), static_cast<unsigned long long>(result.hash));
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rstab: %s\n", e.what());
    return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical experiments on spacelike graphs in warped product spacetimes"};
  app.require_subcommand(1);

  std::string manifest_path, out_dir, grid_spec;
  long long seed = -1;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "execute every task in a manifest");
  run->add_option("manifest", manifest_path, "manifest JSON file")->required();
  run->add_option("--out", out_dir, "output directory (overrides the manifest)");
  run->add_option("--seed", seed, "RNG seed (overrides the manifest)");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 64));

  auto* families_cmd = app.add_subcommand("families", "list the surface and variation families");

  auto* cache = app.add_subcommand("cache", "build or reuse a grid cache file");
  cache->add_option("gridspec", grid_spec, "grid spec, kind:n0xn1")->required();
  cache->add_option("--out", out_dir, "cache directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  if (run->parsed()) return cmd_run(manifest_path, out_dir, seed, jobs);
  if (families_cmd->parsed()) return cmd_families();
  return cmd_cache(grid_spec, out_dir);
}
