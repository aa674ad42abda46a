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
// Certified zero-finding for the ordinary and modified pressure. The
// bisection only moves an endpoint on a certified sign: lower bracket
// bound > 0 or upper bracket bound < 0, never a midpoint heuristic.
// Inconclusive signs escalate the tree depth up to the capacity cap.

#ifndef AFFINE_RECUR_DIMENSION_HPP_
#define AFFINE_RECUR_DIMENSION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "affine_recur/ifs.hpp"
#include "affine_recur/pressure.hpp"
#include "affine_recur/symbolic.hpp"

namespace affine_recur {

enum class DimensionKind { AffinityDim, ShrinkingTargetDim };

/// Classification of lim ell_k / k, the split that decides the solve:
/// sublinear schedules give the affinity dimension, superlinear give 0,
/// linear-rate schedules give the zero of the modified pressure.
enum class Regime { Sublinear, LinearRate, Superlinear, Unclassified };

struct DimensionResult {
  DimensionKind kind = DimensionKind::AffinityDim;
  double s_lo = 0.0;
  double s_hi = 0.0;
  std::optional<Regime> regime;     // set for shrinking-target results
  double regime_rate = 0.0;         // L, for Regime::LinearRate
  int depth_used = 0;
  bool heuristic_d = false;
  bool clamped_at_d = false;        // pressure stayed >= 0 up to s = d
  bool depth_limited = false;       // sign undecidable at the depth cap

  double width() const { return s_hi - s_lo; }
  double midpoint() const { return 0.5 * (s_lo + s_hi); }
};

struct SolverOptions {
  int depth = 12;
  double tol = 1e-3;
  std::optional<double> proven_d;
  TreeOptions tree;
  /// Number of k values used for the chi sequence in the linear-rate
  /// regime (single-word products, so this can vastly exceed the tree
  /// depth at negligible cost).
  std::int64_t chi_depth = 20000;
};

/// Zero of the ordinary pressure bracket on [0, d]; the affinity
/// dimension when it is below d, clamped and flagged otherwise.
DimensionResult solve_affinity_dimension(const AffineSystem& sys,
                                         const SolverOptions& options = {});

/// The shrinking-target dimension: dispatches on lim ell_k / k, solving
/// the modified pressure in the linear-rate regime. The chi term carries
/// no certified rate; its tail oscillation is added to the bracket, so
/// linear-regime enclosures are honest but not formally certified.
DimensionResult solve_shrinking_target_dimension(
    const AffineSystem& sys, const TargetPoint& j, const LengthSchedule& sched,
    const SolverOptions& options = {});

/// Certified staircase of pressure brackets over an s-grid; with a target
/// point the rows carry the modified-pressure band (bracket plus chi and
/// its oscillation).
struct ProfileRow {
  double s;
  double lower;
  double upper;
};

std::vector<ProfileRow> pressure_profile(
    const AffineSystem& sys, const std::optional<TargetPoint>& j,
    const std::optional<LengthSchedule>& sched,
    const std::vector<double>& s_grid, const SolverOptions& options = {});

}  // namespace affine_recur

#endif  // AFFINE_RECUR_DIMENSION_HPP_
