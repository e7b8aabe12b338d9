// SPDX-License-Identifier: MIT
#include "rstab/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rstab/families.hpp"

namespace rstab::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ManifestError("manifest: " + msg); }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> names = {
      "identities",     "slice-calibration", "lr-consistency",  "first-variation",
      "second-variation", "support-identity", "spectrum",        "theorem-probe",
  };
  return names;
}

ExperimentManifest parse_manifest_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be a JSON object");

  ExperimentManifest m;
  if (j.contains("model")) {
    const json& jm = j.at("model");
    m.model.kind = get_or<std::string>(jm, "kind", m.model.kind);
    m.model.n = get_or<int>(jm, "n", m.model.n);
    if (jm.contains("interval")) {
      const auto iv = jm.at("interval").get<std::vector<double>>();
      if (iv.size() != 2) fail("model.interval must have two entries");
      m.model.interval = {iv[0], iv[1]};
    }
  }
  if (j.contains("grid")) {
    const json& jg = j.at("grid");
    m.grid.kind = get_or<std::string>(jg, "kind", m.grid.kind);
    if (jg.contains("resolutions")) {
      for (const auto& row : jg.at("resolutions")) {
        const auto pair = row.get<std::vector<int>>();
        if (pair.size() != 2) fail("grid.resolutions entries must be [n0, n1]");
        m.grid.resolutions.push_back({pair[0], pair[1]});
      }
    }
  }
  if (j.contains("surface")) {
    const json& js = j.at("surface");
    m.surfaces.push_back(js.is_string() ? js.get<std::string>()
                                        : get_or<std::string>(js, "family", ""));
  }
  if (j.contains("surfaces"))
    for (const auto& row : j.at("surfaces"))
      m.surfaces.push_back(row.is_string() ? row.get<std::string>()
                                           : get_or<std::string>(row, "family", ""));
  if (j.contains("variation")) {
    const json& jv = j.at("variation");
    m.variation.f0 = get_or<std::string>(jv, "f0", m.variation.f0);
    m.variation.h_t = get_or<double>(jv, "h_t", m.variation.h_t);
  }
  m.tasks = get_or<std::vector<std::string>>(j, "tasks", {});
  m.r = get_or<std::vector<int>>(j, "r", m.r);
  m.out_dir = get_or<std::string>(j, "out", m.out_dir);
  m.seed = get_or<std::uint64_t>(j, "seed", m.seed);
  return m;
}

ExperimentManifest parse_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest_text(buf.str());
}

spacetime::GRWModel make_model(const ModelSpec& spec) {
  spacetime::GRWModel model;
  if (spec.kind == "de_sitter")
    model = spacetime::make_de_sitter(spec.n);
  else if (spec.kind == "cylinder")
    model = spacetime::make_static_cylinder(spec.n);
  else
    fail("model.kind must be 'de_sitter' or 'cylinder', got '" + spec.kind + "'");
  model.interval_lo = spec.interval[0];
  model.interval_hi = spec.interval[1];
  return model;
}

void validate_manifest(const ExperimentManifest& m) {
  if (m.model.kind != "de_sitter" && m.model.kind != "cylinder")
    fail("model.kind must be 'de_sitter' or 'cylinder', got '" + m.model.kind + "'");
  if (m.model.n < 2) fail("model.n must be at least 2");
  if (m.model.interval[0] >= m.model.interval[1]) fail("model.interval must be increasing");
  if (m.model.kind == "de_sitter" && m.grid.kind != "sphere")
    fail("de_sitter needs grid.kind 'sphere'");
  if (m.model.kind == "cylinder" && m.grid.kind != "torus")
    fail("cylinder needs grid.kind 'torus'");
  if (m.grid.kind != "sphere" && m.grid.kind != "torus")
    fail("grid.kind must be 'sphere' or 'torus', got '" + m.grid.kind + "'");

  if (m.tasks.empty()) fail("task list is empty");
  for (const auto& task : m.tasks) {
    const auto& names = known_tasks();
    if (std::find(names.begin(), names.end(), task) == names.end()) {
      std::string list;
      for (const auto& t : names) list += (list.empty() ? "" : ", ") + t;
      fail("unknown task '" + task + "'; known tasks: " + list);
    }
  }

  const bool needs_grid = !(m.tasks.size() == 1 && m.tasks[0] == "identities");
  if (needs_grid) {
    if (m.model.n != 2)
      fail("grid-based tasks discretize a 2-dimensional fiber, so model.n must be 2");
    if (m.grid.resolutions.empty()) fail("grid.resolutions is empty");
    for (const auto& res : m.grid.resolutions) {
      if (res[0] < 4 || res[1] < 4) fail("resolutions must be at least 4x4");
      if (m.grid.kind == "sphere" && res[1] % 2 != 0)
        fail("sphere grids need an even column count, got " + std::to_string(res[1]));
    }
    if (m.surfaces.empty()) fail("no surface family given");
  }

  const auto kind = m.grid.kind == "sphere" ? surface::GridKind::SphereLatLong
                                            : surface::GridKind::TorusPeriodic;
  for (const auto& text : m.surfaces)
    families::validate_family(families::parse_family(text), families::FamilyRole::Surface,
                              kind);
  families::validate_family(families::parse_family(m.variation.f0),
                            families::FamilyRole::Variation, kind);

  for (int r : m.r)
    if (r < 0 || r > m.model.n - 1)
      fail("r = " + std::to_string(r) + " is outside 0..n-1 with n = " +
           std::to_string(m.model.n));
  if (m.r.empty()) fail("r list is empty");
}

}  // namespace rstab::harness
