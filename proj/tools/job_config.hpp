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
//
// JSON job configuration: one document describing the system, the target
// point, the length schedule, the measure, and task parameters. Parsing
// is strict: unknown fields, wrong types, and invalid values are rejected
// with a field-precise message.

#ifndef AFFINE_RECUR_TOOLS_JOB_CONFIG_HPP_
#define AFFINE_RECUR_TOOLS_JOB_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "affine_recur/ifs.hpp"
#include "affine_recur/measures.hpp"
#include "affine_recur/symbolic.hpp"

namespace affine_recur::cli {

/// Malformed configuration (syntax, schema, or value). Exit code 3.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RenderSpec {
  std::string mode = "words";  // "words" or "chaos"
  int depth = 8;
  std::int64_t points = 20000;
  int width = 512;
  int height = 512;
};

struct TaskSpec {
  int depth = 12;
  double tol = 1e-3;
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  std::int64_t horizon = 64;
  int threads = 1;
  std::optional<double> d_constant;
  double t = 1.0;                    // exponent for `check`
  std::int64_t budget = 20000;       // sampling budget for estimate_D
  std::int64_t chi_depth = 20000;
  std::vector<double> s_grid;
  RenderSpec render;
};

struct MeasureSpec {
  std::string kind = "bernoulli";    // bernoulli | normalized_phi | recurrence_constrained
  std::vector<double> weights;       // bernoulli; empty = uniform
  double t = 0.5;
  int level = 12;
  std::vector<std::int64_t> times;
};

struct JobConfig {
  AffineSystem system;
  std::optional<TargetPoint> target;
  std::optional<LengthSchedule> schedule;
  std::optional<MeasureSpec> measure;
  TaskSpec task;
};

/// Parses and validates the whole document; throws config_error.
JobConfig parse_job_config_text(const std::string& text);
JobConfig load_job_config(const std::string& path);

/// Builds the measure named by the spec (uniform Bernoulli by default).
CylinderMeasure build_measure(const JobConfig& config);

}  // namespace affine_recur::cli

#endif  // AFFINE_RECUR_TOOLS_JOB_CONFIG_HPP_
