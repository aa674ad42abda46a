// Copyright 2026 The affine-recur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "affine_recur/dimension.hpp"
#include "affine_recur/errors.hpp"
#include "affine_recur/measures.hpp"
#include "affine_recur/pressure.hpp"
#include "emit.hpp"
#include "json.hpp"

namespace affine_recur::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string out_path(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / name).string();
}

void write_json(const std::string& path, const ordered_json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

ordered_json system_summary(const AffineSystem& sys) {
  ordered_json out;
  out["dim"] = sys.dim();
  out["maps"] = sys.map_count();
  out["strict"] = sys.strict();
  out["sigma_plus"] = sys.sigma_plus();
  out["sigma_minus"] = sys.sigma_minus();
  out["conformal"] = sys.is_conformal();
  return out;
}

SolverOptions solver_options(const TaskSpec& task) {
  SolverOptions options;
  options.depth = task.depth;
  options.tol = task.tol;
  options.proven_d = task.d_constant;
  options.tree.threads = task.threads;
  options.chi_depth = task.chi_depth;
  return options;
}

const char* regime_name(const std::optional<Regime>& regime) {
  if (!regime) return "none";
  switch (*regime) {
    case Regime::Sublinear: return "sublinear";
    case Regime::LinearRate: return "linear";
    case Regime::Superlinear: return "superlinear";
    case Regime::Unclassified: return "unclassified";
  }
  return "none";
}

ordered_json dimension_json(const DimensionResult& result) {
  ordered_json out;
  out["kind"] = result.kind == DimensionKind::AffinityDim ? "affinity"
                                                          : "shrinking_target";
  out["enclosure"] = {result.s_lo, result.s_hi};
  out["width"] = result.width();
  out["regime"] = regime_name(result.regime);
  if (result.regime && *result.regime == Regime::LinearRate)
    out["regime_rate"] = result.regime_rate;
  out["depth_used"] = result.depth_used;
  out["heuristic_d"] = result.heuristic_d;
  out["clamped_at_d"] = result.clamped_at_d;
  out["depth_limited"] = result.depth_limited;
  return out;
}

void print_dimension(const DimensionResult& result) {
  std::cout << (result.kind == DimensionKind::AffinityDim
                    ? "affinity dimension"
                    : "shrinking-target dimension")
            << " in [" << format_double(result.s_lo) << ", "
            << format_double(result.s_hi) << "]"
            << " (regime " << regime_name(result.regime)
            << (result.heuristic_d ? ", heuristic D" : "")
            << (result.clamped_at_d ? ", clamped at d" : "")
            << (result.depth_limited ? ", depth limited" : "") << ")\n";
}

// Strict mode (the default) refuses systems outside the sigma_1 < 1/2
// hypothesis; with "strict": false they run anyway, with a warning that
// no theorem coverage is claimed.
void enforce_strict_policy(const AffineSystem& sys) {
  const ValidationReport report = validate(sys);
  if (report.clean(true)) return;
  if (sys.strict()) {
    std::string all;
    for (const auto& issue : report.issues) {
      if (!all.empty()) all += "; ";
      all += issue.message;
    }
    throw input_error("strict mode: " + all +
                      "; set system.strict = false to explore anyway");
  }
  for (const auto& issue : report.issues)
    std::cout << "warning: " << issue.message
              << " (outside the strict hypotheses; results are exploratory)\n";
}

TargetPoint require_target(const JobConfig& config) {
  if (!config.target)
    throw config_error("config error: this command needs a 'target'");
  return *config.target;
}

LengthSchedule require_schedule(const JobConfig& config) {
  if (!config.schedule)
    throw config_error("config error: this command needs a 'schedule'");
  return *config.schedule;
}

}  // namespace

int cmd_check(const JobConfig& config, const std::string& out_dir) {
  const AffineSystem& sys = config.system;
  const ValidationReport report = validate(sys);

  ordered_json doc;
  doc["command"] = "check";
  doc["system"] = system_summary(sys);
  doc["per_map"] = ordered_json::array();
  for (const auto& stats : report.per_map) {
    ordered_json entry;
    entry["sigma1"] = stats.sigma1;
    entry["sigma_d"] = stats.sigma_d;
    entry["det"] = stats.det;
    doc["per_map"].push_back(entry);
  }
  doc["violations"] = ordered_json::array();
  for (const auto& issue : report.issues) {
    ordered_json entry;
    entry["map"] = issue.map_index;
    entry["rule"] = issue.rule;
    entry["strict_only"] = issue.strict_only;
    entry["message"] = issue.message;
    doc["violations"].push_back(entry);
    std::cout << "violation: " << issue.message
              << (issue.strict_only ? " (strict mode)" : "") << "\n";
  }

  if (sys.dim() == 2) {
    const auto cone = cone_check_2d(sys, 4096);
    ordered_json entry;
    entry["found"] = cone.has_value();
    entry["resolution"] = 4096;
    if (cone) {
      entry["start"] = cone->start;
      entry["width"] = cone->width;
      entry["margin"] = cone->margin;
      std::cout << "cone certificate: [" << format_double(cone->start) << ", "
                << format_double(cone->start + cone->width) << "] (mod pi)\n";
    } else {
      std::cout << "cone certificate: none found (not a proof of absence)\n";
    }
    doc["cone"] = entry;
  } else {
    doc["cone"] = nullptr;
  }

  {
    const QuasiMultConstant resolved = resolve_quasimult_constant(
        sys, config.task.t, config.task.d_constant, TreeOptions{});
    ordered_json entry;
    entry["t"] = config.task.t;
    entry["d"] = resolved.value;
    entry["heuristic"] = resolved.heuristic;
    if (resolved.heuristic) {
      const QuasiMultReport sampled =
          estimate_D(sys, config.task.t, std::min(config.task.depth, 4),
                     config.task.budget);
      entry["d"] = sampled.d_estimate;
      entry["exhaustive"] = sampled.exhaustive;
      entry["depth"] = sampled.depth;
      entry["worst_left"] = sampled.worst_left.to_string();
      entry["worst_right"] = sampled.worst_right.to_string();
      std::cout << "quasimultiplicativity (heuristic): D >= "
                << format_double(sampled.d_estimate) << " at depth "
                << sampled.depth << (sampled.exhaustive ? " (exhaustive)" : " (sampled)")
                << "\n";
    } else {
      std::cout << "quasimultiplicativity: D = " << format_double(resolved.value)
                << (config.task.d_constant ? " (user supplied)" : " (structural)")
                << "\n";
    }
    doc["quasimultiplicativity"] = entry;
  }

  const bool strict_ok = report.clean(true);
  doc["strict_ok"] = strict_ok;
  write_json(out_path(out_dir, "check.json"), doc);
  std::cout << (strict_ok ? "hypotheses: clean\n"
                          : "hypotheses: violated (see check.json)\n");
  return strict_ok ? kExitOk : kExitHypothesis;
}

int cmd_dim(const JobConfig& config, const std::string& out_dir) {
  enforce_strict_policy(config.system);
  const DimensionResult result =
      solve_affinity_dimension(config.system, solver_options(config.task));
  print_dimension(result);

  ordered_json doc;
  doc["command"] = "dim";
  doc["system"] = system_summary(config.system);
  doc["depth"] = config.task.depth;
  doc["tol"] = config.task.tol;
  doc["result"] = dimension_json(result);
  write_json(out_path(out_dir, "dim.json"), doc);
  return kExitOk;
}

int cmd_starget(const JobConfig& config, const std::string& out_dir) {
  enforce_strict_policy(config.system);
  const TargetPoint target = require_target(config);
  const LengthSchedule schedule = require_schedule(config);
  const DimensionResult result = solve_shrinking_target_dimension(
      config.system, target, schedule, solver_options(config.task));
  print_dimension(result);

  ordered_json doc;
  doc["command"] = "starget";
  doc["system"] = system_summary(config.system);
  doc["depth"] = config.task.depth;
  doc["tol"] = config.task.tol;
  doc["result"] = dimension_json(result);
  write_json(out_path(out_dir, "starget.json"), doc);
  return kExitOk;
}

int cmd_pressure(const JobConfig& config, const std::string& out_dir) {
  if (config.target.has_value() != config.schedule.has_value())
    throw config_error(
        "config error: pressure needs either both 'target' and 'schedule' "
        "(modified pressure) or neither (ordinary pressure)");
  std::vector<double> grid = config.task.s_grid;
  if (grid.empty()) {
    const double d = static_cast<double>(config.system.dim());
    for (int i = 0; i <= 20; ++i) grid.push_back(d * i / 20.0);
  }
  const auto rows = pressure_profile(config.system, config.target,
                                     config.schedule, grid,
                                     solver_options(config.task));

  CsvWriter csv({"s", "lower", "upper"});
  for (const auto& row : rows)
    csv.add_row({format_double(row.s), format_double(row.lower),
                 format_double(row.upper)});
  write_file(out_path(out_dir, "pressure.csv"), csv.text());

  ordered_json doc;
  doc["command"] = "pressure";
  doc["system"] = system_summary(config.system);
  doc["depth"] = config.task.depth;
  doc["modified"] = config.target.has_value();
  doc["rows"] = rows.size();
  doc["s_min"] = grid.front();
  doc["s_max"] = grid.back();
  write_json(out_path(out_dir, "pressure.json"), doc);
  std::cout << "pressure staircase: " << rows.size() << " rows -> pressure.csv\n";
  return kExitOk;
}

int cmd_simulate(const JobConfig& config, const std::string& out_dir) {
  const TargetPoint target = require_target(config);
  const LengthSchedule schedule = require_schedule(config);
  const CylinderMeasure measure = build_measure(config);
  const SimulationReport report = simulate_recurrence(
      config.system, measure, target, schedule, config.task.horizon,
      config.task.samples, config.task.seed, config.task.threads);

  CsvWriter csv({"k", "ell", "expected_mass", "hit_rate", "frac_hit_past",
                 "partial_sum"});
  for (std::int64_t k = 1; k <= report.horizon; ++k) {
    const size_t i = static_cast<size_t>(k - 1);
    csv.add_row({std::to_string(k), std::to_string(schedule.at(k)),
                 format_double(report.expected_mass[i]),
                 format_double(report.hit_rate[i]),
                 format_double(report.frac_hit_past[static_cast<size_t>(k)]),
                 format_double(report.partial_sums[i])});
  }
  write_file(out_path(out_dir, "simulate.csv"), csv.text());

  ordered_json doc;
  doc["command"] = "simulate";
  doc["system"] = system_summary(config.system);
  doc["horizon"] = report.horizon;
  doc["samples"] = report.samples;
  doc["seed"] = report.seed;
  doc["partial_sum"] = report.partial_sums.back();
  doc["frac_hit_past_half"] =
      report.frac_hit_past[static_cast<size_t>(report.horizon / 2)];
  const char* kind = "inconclusive";
  if (report.classification.kind == SeriesClassification::Kind::Converges)
    kind = "converges";
  else if (report.classification.kind == SeriesClassification::Kind::Diverges)
    kind = "diverges";
  doc["series"] = kind;
  doc["schedule_extended"] = schedule.extends_beyond(report.horizon);
  doc["series_proven"] = report.classification.proven;
  doc["tail_exponent"] = report.classification.tail_exponent;
  write_json(out_path(out_dir, "simulate.json"), doc);

  std::cout << "simulated " << report.samples << " orbits to horizon "
            << report.horizon << "; mass series " << kind
            << (report.classification.proven ? " (closed form)" : " (tail diagnostic)")
            << "\n";
  return kExitOk;
}

int cmd_render(const JobConfig& config, const std::string& out_dir) {
  const AffineSystem& sys = config.system;
  const RenderSpec& spec = config.task.render;
  const int d = sys.dim();

  std::vector<std::vector<double>> points;
  if (spec.mode == "words") {
    // all projections of depth-n words
    double leaves = std::pow(static_cast<double>(sys.map_count()), spec.depth);
    if (leaves > static_cast<double>(std::int64_t{1} << 22))
      throw capacity_error("render: word tree exceeds the point cap; "
                           "lower render.depth");
    std::vector<std::uint8_t> letters(static_cast<size_t>(spec.depth), 0);
    for (;;) {
      const Word w(letters, sys.map_count());
      points.push_back(project_word(sys, w).point);
      int pos = spec.depth - 1;
      while (pos >= 0 && ++letters[static_cast<size_t>(pos)] == sys.map_count()) {
        letters[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  } else {
    // chaos game with burn-in
    SplitMix64 rng(config.task.seed);
    std::vector<double> x(static_cast<size_t>(d), 0.0);
    for (int burn = 0; burn < 128; ++burn) {
      const auto& f = sys.map(static_cast<int>(
          rng.next_below(static_cast<std::uint32_t>(sys.map_count()))));
      x = f.linear.apply(x);
      for (int c = 0; c < d; ++c) x[static_cast<size_t>(c)] += f.translation[static_cast<size_t>(c)];
    }
    points.reserve(static_cast<size_t>(spec.points));
    for (std::int64_t i = 0; i < spec.points; ++i) {
      const auto& f = sys.map(static_cast<int>(
          rng.next_below(static_cast<std::uint32_t>(sys.map_count()))));
      x = f.linear.apply(x);
      for (int c = 0; c < d; ++c) x[static_cast<size_t>(c)] += f.translation[static_cast<size_t>(c)];
      points.push_back(x);
    }
  }

  // CSV point cloud
  std::vector<std::string> columns;
  const char* names[3] = {"x", "y", "z"};
  for (int c = 0; c < d; ++c)
    columns.push_back(c < 3 ? names[c] : "x" + std::to_string(c));
  CsvWriter csv(columns);
  for (const auto& p : points) {
    std::vector<std::string> cells;
    cells.reserve(static_cast<size_t>(d));
    for (double v : p) cells.push_back(format_double(v));
    csv.add_row(cells);
  }
  write_file(out_path(out_dir, "render.csv"), csv.text());

  // raster: first two coordinates (or a midline strip in 1-D)
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const auto& p : points) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    const double y = d >= 2 ? p[1] : 0.0;
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
  if (hi_x - lo_x < 1e-12) { lo_x -= 0.5; hi_x += 0.5; }
  if (hi_y - lo_y < 1e-12) { lo_y -= 0.5; hi_y += 0.5; }
  const double pad_x = 0.05 * (hi_x - lo_x);
  const double pad_y = 0.05 * (hi_y - lo_y);
  lo_x -= pad_x; hi_x += pad_x; lo_y -= pad_y; hi_y += pad_y;

  Raster image(spec.width, spec.height);
  for (const auto& p : points) {
    const double y = d >= 2 ? p[1] : 0.0;
    const int px = static_cast<int>((p[0] - lo_x) / (hi_x - lo_x) * (spec.width - 1) + 0.5);
    const int py = static_cast<int>((hi_y - y) / (hi_y - lo_y) * (spec.height - 1) + 0.5);
    image.set(px, py, 0, 0, 0);
  }
  write_file(out_path(out_dir, "render.ppm"), image.to_p6());

  ordered_json doc;
  doc["command"] = "render";
  doc["system"] = system_summary(sys);
  doc["mode"] = spec.mode;
  doc["points"] = points.size();
  doc["bounds"] = {lo_x, hi_x, lo_y, hi_y};
  doc["image"] = {spec.width, spec.height};
  write_json(out_path(out_dir, "render.json"), doc);
  std::cout << "rendered " << points.size() << " points -> render.csv, render.ppm\n";
  return kExitOk;
}

}  // namespace affine_recur::cli
