// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rstab/spacetime.hpp"
#include "rstab/types.hpp"

namespace rstab::harness {

struct ModelSpec {
  std::string kind = "de_sitter";  // "de_sitter" | "cylinder"
  int n = 2;
  std::array<double, 2> interval{-3.0, 3.0};
};

struct GridSpec {
  std::string kind = "sphere";  // "sphere" | "torus"
  std::vector<std::array<int, 2>> resolutions;
};

struct VariationBlock {
  std::string f0 = "const(1)";
  double h_t = 0.01;
};

// One experiment: a model, a resolution ladder, one or more surfaces by
// family string, a variation speed, and the task list. Non-probe tasks
// run on the first surface; theorem-probe consumes the whole list.
struct ExperimentManifest {
  ModelSpec model;
  GridSpec grid;
  std::vector<std::string> surfaces;
  VariationBlock variation;
  std::vector<std::string> tasks;
  std::vector<int> r{0};
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

// Task names accepted in manifests.
const std::vector<std::string>& known_tasks();

ExperimentManifest parse_manifest_text(const std::string& text);
ExperimentManifest parse_manifest_file(const std::string& path);

// Full validation: model/grid kinds, resolutions, family resolvability
// against the catalog, task names, r <= n-1. Throws ManifestError with
// the diagnostic message.
void validate_manifest(const ExperimentManifest& m);

// The model named by the manifest.
spacetime::GRWModel make_model(const ModelSpec& spec);

}  // namespace rstab::harness
