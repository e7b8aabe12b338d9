// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "rstab/manifest.hpp"

namespace rstab::harness {

// One convergence series of a task: (h, error) pairs in ladder order.
struct Series {
  std::string label;
  std::vector<std::array<double, 2>> points;
};

struct TaskRecord {
  std::string task;
  int r = -1;  // -1 when the task does not depend on r
  std::string status;  // "pass" | "fail" | "error"
  std::string detail;
  std::map<std::string, double> values;
  std::vector<Series> series;
  std::string table_header;        // per-task CSV, when the task emits a table
  std::vector<std::string> table;
  double wall_ms = 0.0;
};

struct RunReport {
  std::vector<TaskRecord> records;
  int exit_code = 0;  // 0 all pass, 1 any fail or error
};

// Executes every manifest task for every listed r. Records come back in
// manifest order regardless of jobs, and all numbers are deterministic
// in (manifest, seed).
RunReport run_manifest(const ExperimentManifest& m, int jobs = 1);

// Writes report.json, convergence.csv (columns task,r,h,error), and one
// CSV per record into out_dir.
void write_outputs(const RunReport& report, const ExperimentManifest& m,
                   const std::string& out_dir);

}  // namespace rstab::harness
