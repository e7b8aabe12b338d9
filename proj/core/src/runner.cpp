// SPDX-License-Identifier: MIT
#include "rstab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <thread>

#include <json.hpp>

#include "rstab/calculus.hpp"
#include "rstab/convergence.hpp"
#include "rstab/curvalg.hpp"
#include "rstab/families.hpp"
#include "rstab/stability.hpp"
#include "rstab/variation.hpp"

namespace rstab::harness {

namespace {

using nlohmann::json;

// Pinned task tolerances. Slope bands follow the documented reading of
// the convergence contracts; the bound constants carry an order of
// magnitude of headroom over measured behavior.
constexpr double kBandLo = 1.7, kBandHi = 2.3;  // pinned 2.0 +/- 0.3 bands
constexpr double kMinSlope = 1.6;               // plain second-order floor
constexpr double kSecondVariationBound = 5.0;   // x h^2 (1 + |bilinear|)
constexpr double kSliceSupportBound = 1.0;      // x h^2 (1 + scale)

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 step keeps task streams independent.
  std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ull + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// A smooth test function kept as mode coefficients so the same function
// can be sampled on every rung of the resolution ladder.
struct SmoothField {
  surface::GridKind kind;
  std::vector<std::array<int, 2>> modes;
  std::vector<double> cos_coef, sin_coef;

  Field eval(const surface::FiberGrid& grid) const {
    Field f(grid.nodes(), 0.0);
    for (int i = 0; i < grid.n0; ++i)
      for (int j = 0; j < grid.n1; ++j) {
        const double a = grid.c0[i], b = grid.c1[j];
        double v = 0.0;
        for (std::size_t q = 0; q < modes.size(); ++q) {
          if (kind == surface::GridKind::SphereLatLong) {
            v += cos_coef[q] * families::real_harmonic(modes[q][0], modes[q][1], a, b);
          } else {
            const double ph = modes[q][0] * a + modes[q][1] * b;
            v += cos_coef[q] * std::cos(ph) + sin_coef[q] * std::sin(ph);
          }
        }
        f[grid.idx(i, j)] = v;
      }
    return f;
  }
};

SmoothField random_smooth(surface::GridKind kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  SmoothField f;
  f.kind = kind;
  if (kind == surface::GridKind::SphereLatLong) {
    for (int l = 1; l <= 3; ++l)
      for (int m = -l; m <= l; ++m) f.modes.push_back({l, m});
  } else {
    f.modes = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}};
  }
  for (std::size_t q = 0; q < f.modes.size(); ++q) {
    f.cos_coef.push_back(coef(rng));
    f.sin_coef.push_back(coef(rng));
  }
  return f;
}

struct Ladder {
  std::vector<surface::FiberGrid> grid;
  std::vector<surface::SurfaceGeometry> geom;
  std::vector<double> h;
  double h_max = 0.0;
};

Ladder build_ladder(const ExperimentManifest& m) {
  Ladder out;
  const auto model = make_model(m.model);
  const auto spec = families::parse_family(m.surfaces.at(0));
  for (const auto& res : m.grid.resolutions) {
    auto grid = surface::build_fiber_grid(model, res[0], res[1]);
    auto u = families::surface_field(grid, spec);
    out.geom.push_back(surface::embed_graph(model, grid, surface::GraphFunction{u}));
    out.h.push_back(grid.h());
    out.h_max = std::max(out.h_max, grid.h());
    out.grid.push_back(std::move(grid));
  }
  return out;
}

bool is_constant_height(const Field& u) {
  double mean = 0.0;
  for (double v : u) mean += v;
  mean /= static_cast<double>(u.size());
  for (double v : u)
    if (std::abs(v - mean) > 1e-12) return false;
  return true;
}

std::string verdict_word(stability::Verdict v) {
  switch (v) {
    case stability::Verdict::StronglyStable: return "strongly-r-stable";
    case stability::Verdict::Marginal: return "marginal";
    default: return "unstable";
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void set_outcome(TaskRecord& rec, bool ok, const std::string& why_failed) {
  rec.status = ok ? "pass" : "fail";
  if (!ok) rec.detail = why_failed;
}

// ---- task bodies -----------------------------------------------------

TaskRecord task_identities(const ExperimentManifest& m) {
  TaskRecord rec{.task = "identities"};
  // 20 samples per dimension, 100 total; Reilly's expansion caps at n=6.
  double newton_gap = 0.0, trace_res = 0.0;
  int samples = 0;
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < 20; ++k) {
      const auto sample =
          curvalg::ShapeSample::random(n, mix_seed(m.seed, 1000 + 100 * n + k));
      const auto seq = curvalg::newton_seq(sample);
      for (int r = 0; r <= n; ++r) {
        const auto reilly = curvalg::newton_reilly(sample, r);
        const double gap = (seq.P[r] - reilly).cwiseAbs().maxCoeff() /
                           (1.0 + reilly.cwiseAbs().maxCoeff());
        newton_gap = std::max(newton_gap, gap);
      }
      trace_res = std::max(trace_res, curvalg::trace_identity_residuals(sample).max());
      ++samples;
    }
  rec.values["samples"] = samples;
  rec.values["max_newton_gap"] = newton_gap;
  rec.values["max_trace_residual"] = trace_res;
  set_outcome(rec, newton_gap < 1e-9 && trace_res < 1e-9,
              "algebraic residuals exceed 1e-9");
  return rec;
}

TaskRecord task_slice_calibration(const ExperimentManifest& m) {
  TaskRecord rec{.task = "slice-calibration"};
  const auto spec = families::parse_family(m.surfaces.at(0));
  if (spec.name != "slice") {
    rec.status = "error";
    rec.detail = "slice-calibration needs a slice(s0) surface, got " + spec.name;
    return rec;
  }
  const auto ladder = build_ladder(m);
  const auto model = make_model(m.model);
  const double s0 = spec.args[0];
  const auto data = spacetime::slice_data(model, s0);
  const double area_exact =
      data.area_factor * (m.grid.kind == "sphere" ? 4.0 * std::numbers::pi
                                                  : 4.0 * std::numbers::pi * std::numbers::pi);
  Series shape{"shape", {}}, area{"area", {}};
  for (std::size_t k = 0; k < ladder.geom.size(); ++k) {
    const auto& geom = ladder.geom[k];
    double shape_err = 0.0;
    const Eigen::Matrix2d target = data.lambda * Eigen::Matrix2d::Identity();
    for (const auto& node : geom.node)
      shape_err = std::max(shape_err, (node.a_coord - target).cwiseAbs().maxCoeff());
    shape.points.push_back({ladder.h[k], shape_err});
    area.points.push_back({ladder.h[k], std::abs(geom.area - area_exact)});
  }
  auto errs = [](const Series& s) {
    std::vector<double> e;
    for (auto& p : s.points) e.push_back(p[1]);
    return e;
  };
  const auto shape_fit = fitted_slope(ladder.h, errs(shape));
  const auto area_fit = fitted_slope(ladder.h, errs(area));
  rec.series = {shape, area};
  rec.values["lambda"] = data.lambda;
  rec.values["shape_slope"] = shape_fit.slope;
  rec.values["area_slope"] = area_fit.slope;
  rec.values["shape_err_finest"] = shape.points.back()[1];
  rec.values["area_err_finest"] = area.points.back()[1];
  const bool shape_ok =
      shape_fit.at_floor || (shape_fit.slope >= kBandLo && shape_fit.slope <= kBandHi);
  const bool area_ok =
      area_fit.at_floor || (area_fit.slope >= kBandLo && area_fit.slope <= kBandHi);
  set_outcome(rec, shape_ok && area_ok, "fitted slope outside the pinned 2.0 +/- 0.3 band");
  return rec;
}

TaskRecord task_lr_consistency(const ExperimentManifest& m, int r) {
  TaskRecord rec{.task = "lr-consistency", .r = r};
  const auto ladder = build_ladder(m);
  std::mt19937_64 rng(mix_seed(m.seed, 2000 + r));
  const auto probe = random_smooth(ladder.grid[0].kind, rng);
  std::vector<SmoothField> fs, gs;
  for (int q = 0; q < 5; ++q) {
    fs.push_back(random_smooth(ladder.grid[0].kind, rng));
    gs.push_back(random_smooth(ladder.grid[0].kind, rng));
  }
  Series cons{"consistency", {}}, ibp{"ibp", {}};
  for (std::size_t k = 0; k < ladder.geom.size(); ++k) {
    const auto& geom = ladder.geom[k];
    const Field f = probe.eval(ladder.grid[k]);
    const Field lt = calculus::lr_trace_form(geom, r, f);
    const Field ld = calculus::lr_divergence_form(geom, r, f);
    double gap = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i)
      gap = std::max(gap, std::abs(lt[i] - ld[i]));
    cons.points.push_back({ladder.h[k], gap});

    double defect = 0.0;
    for (int q = 0; q < 5; ++q) {
      const Field fq = fs[q].eval(ladder.grid[k]);
      const Field gq = gs[q].eval(ladder.grid[k]);
      const Field lf = calculus::lr_divergence_form(geom, r, fq);
      Field prod(lf.size());
      for (std::size_t i = 0; i < lf.size(); ++i) prod[i] = lf[i] * gq[i];
      defect = std::max(defect, std::abs(surface::integrate(geom, prod) +
                                         calculus::dirichlet_form(geom, r, fq, gq)));
    }
    ibp.points.push_back({ladder.h[k], defect});
  }
  auto errs = [](const Series& s) {
    std::vector<double> e;
    for (auto& p : s.points) e.push_back(p[1]);
    return e;
  };
  const auto cons_fit = fitted_slope(ladder.h, errs(cons));
  const auto ibp_fit = fitted_slope(ladder.h, errs(ibp));
  rec.series = {cons, ibp};
  rec.values["consistency_slope"] = cons_fit.slope;
  rec.values["ibp_slope"] = ibp_fit.slope;
  rec.values["consistency_err_finest"] = cons.points.back()[1];
  rec.values["ibp_err_finest"] = ibp.points.back()[1];
  set_outcome(rec, second_order(cons_fit, kMinSlope) && second_order(ibp_fit, kMinSlope),
              "operator route agreement below second order");
  return rec;
}

TaskRecord task_first_variation(const ExperimentManifest& m, int r) {
  TaskRecord rec{.task = "first-variation", .r = r};
  const auto ladder = build_ladder(m);
  const auto f0_spec = families::parse_family(m.variation.f0);
  Series res{"residual", {}};
  variation::FirstVariationReport finest;
  for (std::size_t k = 0; k < ladder.geom.size(); ++k) {
    const Field f0 = families::variation_field(ladder.grid[k], f0_spec);
    // h_t shrinks with h so the fit measures the joint order.
    const double h_t = m.variation.h_t * ladder.h[k] / ladder.h_max;
    const auto spec = variation::make_variation(ladder.geom[k], f0, h_t);
    finest = variation::first_variation_check(spec, r);
    res.points.push_back({ladder.h[k], finest.residual});
  }
  std::vector<double> errors;
  for (auto& p : res.points) errors.push_back(p[1]);
  const auto fit = fitted_slope(ladder.h, errors);
  rec.series = {res};
  rec.values["fd"] = finest.fd;
  rec.values["formula"] = finest.formula;
  rec.values["slope"] = fit.slope;
  rec.values["residual_finest"] = finest.residual;
  rec.values["evolution_residual_finest"] = finest.evolution_residual;
  rec.values["balance_residual_finest"] = finest.balance_residual;
  set_outcome(rec, fit.at_floor || (fit.slope >= kBandLo && fit.slope <= kBandHi),
              "fitted slope outside the pinned 2.0 +/- 0.3 band");
  return rec;
}

TaskRecord task_second_variation(const ExperimentManifest& m, int r) {
  TaskRecord rec{.task = "second-variation", .r = r};
  const auto ladder = build_ladder(m);
  const auto f0_spec = families::parse_family(m.variation.f0);
  Series e_fd{"fd_vs_bilinear", {}}, e_dir{"direct_vs_bilinear", {}};
  bool ok = true;
  variation::SecondVariationReport finest;
  for (std::size_t k = 0; k < ladder.geom.size(); ++k) {
    const Field f0 = families::variation_field(ladder.grid[k], f0_spec);
    const double h_t = m.variation.h_t * ladder.h[k] / ladder.h_max;
    const auto spec = variation::make_variation(ladder.geom[k], f0, h_t);
    finest = variation::second_variation_check(spec, r);
    const double fd_gap = std::abs(finest.fd - finest.bilinear);
    const double dir_gap = std::abs(finest.direct - finest.bilinear);
    e_fd.points.push_back({ladder.h[k], fd_gap});
    e_dir.points.push_back({ladder.h[k], dir_gap});
    const double bound =
        kSecondVariationBound * ladder.h[k] * ladder.h[k] * (1.0 + std::abs(finest.bilinear));
    ok = ok && fd_gap <= bound && dir_gap <= bound;
  }
  rec.series = {e_fd, e_dir};
  rec.values["fd"] = finest.fd;
  rec.values["direct"] = finest.direct;
  rec.values["bilinear"] = finest.bilinear;
  rec.values["fd_gap_finest"] = e_fd.points.back()[1];
  rec.values["direct_gap_finest"] = e_dir.points.back()[1];
  set_outcome(rec, ok, "route disagreement above the pinned h^2 bound");
  return rec;
}

TaskRecord task_support_identity(const ExperimentManifest& m, int r) {
  TaskRecord rec{.task = "support-identity", .r = r};
  const auto ladder = build_ladder(m);
  const bool slice = is_constant_height(ladder.geom[0].u);
  Series res{"residual", {}};
  bool slice_ok = true;
  double scale = 0.0;
  for (std::size_t k = 0; k < ladder.geom.size(); ++k) {
    const auto rep = stability::support_identity_residual(ladder.geom[k], r);
    res.points.push_back({ladder.h[k], rep.max_residual});
    scale = rep.scale;
    slice_ok = slice_ok && rep.max_residual <= kSliceSupportBound * ladder.h[k] * ladder.h[k] *
                                                   (1.0 + rep.scale);
  }
  std::vector<double> errors;
  for (auto& p : res.points) errors.push_back(p[1]);
  const auto fit = fitted_slope(ladder.h, errors);
  rec.series = {res};
  rec.values["slope"] = fit.slope;
  rec.values["residual_finest"] = res.points.back()[1];
  rec.values["scale"] = scale;
  rec.values["is_slice"] = slice ? 1.0 : 0.0;
  if (slice)
    set_outcome(rec, slice_ok, "slice residual above the pinned h^2 bound");
  else
    set_outcome(rec, second_order(fit, kMinSlope), "residual decay below second order");
  return rec;
}

TaskRecord task_spectrum(const ExperimentManifest& m, int r) {
  TaskRecord rec{.task = "spectrum", .r = r};
  const auto ladder = build_ladder(m);
  const auto report = stability::stability_spectrum(ladder.geom.back(), r, 8);
  rec.values["top"] = report.top;
  rec.values["tol"] = report.tol;
  rec.values["eigenvalues"] = static_cast<double>(report.eigenvalues.size());
  rec.detail = "verdict " + verdict_word(report.verdict);
  rec.table_header = "index,eigenvalue";
  for (std::size_t q = 0; q < report.eigenvalues.size(); ++q)
    rec.table.push_back(std::to_string(q) + "," + fmt(report.eigenvalues[q]));
  rec.status = "pass";
  return rec;
}

TaskRecord task_theorem_probe(const ExperimentManifest& m, int r) {
  TaskRecord rec{.task = "theorem-probe", .r = r};
  const auto model = make_model(m.model);
  const auto& res = m.grid.resolutions.back();
  const auto grid = surface::build_fiber_grid(model, res[0], res[1]);
  std::vector<stability::ProbeCase> cases;
  for (const auto& text : m.surfaces)
    cases.push_back({text, families::surface_field(grid, families::parse_family(text))});
  const auto results = stability::theorem_probe(model, grid, cases, r);
  int inconsistent = 0, unstable = 0;
  rec.table_header =
      "label,verdict,top,tol,theorem_margin,corollary_margin,degenerate_fraction,"
      "hypothesis_strict,is_slice,is_r_maximal,consistent";
  for (const auto& p : results) {
    inconsistent += p.consistent ? 0 : 1;
    unstable += p.verdict == stability::Verdict::Unstable ? 1 : 0;
    rec.table.push_back(p.label + "," + verdict_word(p.verdict) + "," + fmt(p.top) + "," +
                        fmt(p.tol) + "," + fmt(p.margins.theorem_margin) + "," +
                        fmt(p.margins.corollary_margin) + "," +
                        fmt(p.margins.degenerate_fraction) + "," +
                        (p.hypothesis_met_strict ? "1" : "0") + "," + (p.is_slice ? "1" : "0") +
                        "," + (p.is_r_maximal ? "1" : "0") + "," + (p.consistent ? "1" : "0"));
  }
  rec.values["cases"] = static_cast<double>(results.size());
  rec.values["inconsistent"] = inconsistent;
  rec.values["unstable"] = unstable;
  set_outcome(rec, inconsistent == 0,
              std::to_string(inconsistent) + " probe case(s) contradict the theorem");
  return rec;
}

TaskRecord run_one(const ExperimentManifest& m, const std::string& task, int r) {
  const auto t0 = std::chrono::steady_clock::now();
  TaskRecord rec;
  try {
    if (task == "identities")
      rec = task_identities(m);
    else if (task == "slice-calibration")
      rec = task_slice_calibration(m);
    else if (task == "lr-consistency")
      rec = task_lr_consistency(m, r);
    else if (task == "first-variation")
      rec = task_first_variation(m, r);
    else if (task == "second-variation")
      rec = task_second_variation(m, r);
    else if (task == "support-identity")
      rec = task_support_identity(m, r);
    else if (task == "spectrum")
      rec = task_spectrum(m, r);
    else
      rec = task_theorem_probe(m, r);
  } catch (const std::exception& e) {
    rec.task = task;
    rec.r = r;
    rec.status = "error";
    rec.detail = e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

bool task_uses_r(const std::string& task) {
  return task != "identities" && task != "slice-calibration";
}

json manifest_json(const ExperimentManifest& m) {
  json j;
  j["model"] = {{"kind", m.model.kind},
                {"n", m.model.n},
                {"interval", {m.model.interval[0], m.model.interval[1]}}};
  json res = json::array();
  for (const auto& p : m.grid.resolutions) res.push_back({p[0], p[1]});
  j["grid"] = {{"kind", m.grid.kind}, {"resolutions", res}};
  j["surfaces"] = m.surfaces;
  j["variation"] = {{"f0", m.variation.f0}, {"h_t", m.variation.h_t}};
  j["tasks"] = m.tasks;
  j["r"] = m.r;
  j["seed"] = m.seed;
  // The output directory is deliberately not echoed: two runs of one
  // manifest into different directories must produce identical bytes.
  return j;
}

}  // namespace

RunReport run_manifest(const ExperimentManifest& m, int jobs) {
  validate_manifest(m);
  struct Slot {
    std::string task;
    int r;
  };
  std::vector<Slot> slots;
  for (const auto& task : m.tasks) {
    if (task_uses_r(task))
      for (int r : m.r) slots.push_back({task, r});
    else
      slots.push_back({task, -1});
  }

  RunReport report;
  report.records.resize(slots.size());
  const int workers = std::clamp(jobs, 1, 8);
  if (workers == 1) {
    for (std::size_t k = 0; k < slots.size(); ++k)
      report.records[k] = run_one(m, slots[k].task, slots[k].r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < slots.size(); k = next.fetch_add(1))
          report.records[k] = run_one(m, slots[k].task, slots[k].r);
      });
    for (auto& t : pool) t.join();
  }

  for (const auto& rec : report.records)
    if (rec.status != "pass") report.exit_code = 1;
  return report;
}

void write_outputs(const RunReport& report, const ExperimentManifest& m,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  json j;
  j["manifest"] = manifest_json(m);
  j["exit_code"] = report.exit_code;
  j["environment"] = {{"compiler", __VERSION__},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)}};
  {
    // Wall-clock stamp; consumers comparing reports strip this line and
    // the per-record wall_ms lines.
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = buf;
  }
  json records = json::array();
  for (const auto& rec : report.records) {
    json jr;
    jr["task"] = rec.task;
    jr["r"] = rec.r;
    jr["status"] = rec.status;
    jr["detail"] = rec.detail;
    jr["values"] = rec.values;
    json series = json::object();
    for (const auto& s : rec.series) {
      json pts = json::array();
      for (const auto& p : s.points) pts.push_back({p[0], p[1]});
      series[s.label] = pts;
    }
    jr["series"] = series;
    jr["wall_ms"] = rec.wall_ms;
    records.push_back(jr);
  }
  j["records"] = records;
  std::ofstream(fs::path(out_dir) / "report.json") << j.dump(2) << "\n";

  std::ofstream conv(fs::path(out_dir) / "convergence.csv");
  conv << "task,r,h,error\n";
  for (const auto& rec : report.records)
    for (const auto& s : rec.series) {
      const std::string label =
          rec.series.size() == 1 ? rec.task : rec.task + "." + s.label;
      for (const auto& p : s.points)
        conv << label << "," << rec.r << "," << fmt(p[0]) << "," << fmt(p[1]) << "\n";
    }

  for (const auto& rec : report.records) {
    std::string name = rec.task;
    for (char& c : name)
      if (c == '-') c = '_';
    if (rec.r >= 0) name += "_r" + std::to_string(rec.r);
    std::ofstream out(fs::path(out_dir) / (name + ".csv"));
    if (!rec.table.empty()) {
      out << rec.table_header << "\n";
      for (const auto& row : rec.table) out << row << "\n";
    } else if (!rec.series.empty()) {
      out << "series,h,error\n";
      for (const auto& s : rec.series)
        for (const auto& p : s.points)
          out << s.label << "," << fmt(p[0]) << "," << fmt(p[1]) << "\n";
    } else {
      out << "name,value\n";
      for (const auto& [key, value] : rec.values) out << key << "," << fmt(value) << "\n";
    }
  }
}

}  // namespace rstab::harness
