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

#include "affine_recur/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affine_recur/errors.hpp"

namespace affine_recur {

namespace {

void require_usable(const AffineSystem& sys) {
  const ValidationReport report = validate(sys);
  if (!report.clean(/*strict=*/false)) {
    std::string all;
    for (const auto& issue : report.issues) {
      if (issue.strict_only) continue;
      if (!all.empty()) all += "; ";
      all += issue.message;
    }
    throw input_error("system violates solver hypotheses: " + all);
  }
}

enum class Sign { Positive, Negative, Inconclusive };

struct SignResult {
  Sign sign;
  double band_lo;
  double band_hi;
  int depth;
  bool heuristic_d;
};

// Band for the pressure value at s. For the affinity problem the band is
// the certified bracket itself; for the linear-rate modified pressure it
// is the bracket shifted by the chi estimate and widened by the observed
// chi oscillation.
struct BandEvaluator {
  const AffineSystem& sys;
  const SolverOptions& options;
  const TargetPoint* target = nullptr;       // null: ordinary pressure
  const LengthSchedule* schedule = nullptr;

  SignResult evaluate(double s, int max_depth) const {
    double chi_shift = 0.0;
    double chi_unc = 0.0;
    if (target != nullptr) {
      const ChiDiagnostic chi =
          chi_estimate(sys, s, *target, *schedule, chi_depth());
      chi_shift = chi.last;
      chi_unc = chi.oscillation;
    }
    SignResult result{Sign::Inconclusive, 0.0, 0.0, 0, false};
    // Escalate 1, 2, 4, ... and finish at max_depth exactly.
    for (int depth = 1; depth <= max_depth;
         depth = (depth < max_depth && depth * 2 > max_depth) ? max_depth
                                                              : depth * 2) {
      const PressureBracket bracket =
          ordinary_pressure(sys, s, depth, options.proven_d, options.tree);
      result.band_lo = bracket.lower + chi_shift - chi_unc;
      result.band_hi = bracket.upper + chi_shift + chi_unc;
      result.depth = depth;
      result.heuristic_d = bracket.heuristic_d;
      if (result.band_lo > 0.0) {
        result.sign = Sign::Positive;
        return result;
      }
      if (result.band_hi < 0.0) {
        result.sign = Sign::Negative;
        return result;
      }
    }
    return result;
  }

  std::int64_t chi_depth() const {
    // Keep the chi pass within its letter budget for steep schedules.
    std::int64_t depth = std::max<std::int64_t>(64, options.chi_depth);
    const std::int64_t cap = std::int64_t{1} << 22;
    while (depth > 64 && schedule->at(depth) > cap) depth /= 2;
    return depth;
  }
};

DimensionResult bisect_zero(const AffineSystem& sys, const BandEvaluator& band,
                            const SolverOptions& options, DimensionKind kind) {
  require_usable(sys);
  const double d = static_cast<double>(sys.dim());
  const int max_depth = std::min(
      options.depth,
      max_tree_depth(sys.map_count(), options.tree.max_leaf_products));
  if (max_depth < 1)
    throw capacity_error("solver: no tree depth fits the leaf cap");

  DimensionResult result;
  result.kind = kind;
  result.s_lo = 0.0;
  result.s_hi = d;

  // Pressure at s = 0 is log m > 0 (phi^0 == 1), and chi(0) = 0.
  const SignResult at_top = band.evaluate(d, max_depth);
  result.depth_used = at_top.depth;
  result.heuristic_d = at_top.heuristic_d;
  if (at_top.sign == Sign::Positive) {
    // No sign change on [0, d]: the formula domain ends here.
    result.s_lo = d;
    result.s_hi = d;
    result.clamped_at_d = true;
    return result;
  }
  bool top_certified_negative = (at_top.sign == Sign::Negative);

  const double slope_floor =
      -std::log(sys.sigma_plus());  // smallest possible |dP/ds|
  int guard = 0;
  while (result.s_hi - result.s_lo > options.tol && ++guard < 200) {
    const double mid = 0.5 * (result.s_lo + result.s_hi);
    const SignResult at_mid = band.evaluate(mid, max_depth);
    result.depth_used = std::max(result.depth_used, at_mid.depth);
    result.heuristic_d = result.heuristic_d || at_mid.heuristic_d;
    if (at_mid.sign == Sign::Positive) {
      result.s_lo = mid;
    } else if (at_mid.sign == Sign::Negative) {
      result.s_hi = mid;
      top_certified_negative = true;
    } else {
      // Sign undecidable at the depth cap. The band still pins the zero
      // near mid: |P(mid)| <= max(|band|), and |dP/ds| >= |log sigma_+|.
      result.depth_limited = true;
      if (slope_floor > 0.0) {
        const double reach_lo = std::max(0.0, -at_mid.band_lo) / slope_floor;
        const double reach_hi = std::max(0.0, at_mid.band_hi) / slope_floor;
        result.s_lo = std::max(result.s_lo, mid - reach_lo);
        result.s_hi = std::min(result.s_hi, mid + reach_hi);
      }
      break;
    }
  }
  result.clamped_at_d = (result.s_hi >= d && !top_certified_negative);
  return result;
}

}  // namespace

DimensionResult solve_affinity_dimension(const AffineSystem& sys,
                                         const SolverOptions& options) {
  BandEvaluator band{sys, options, nullptr, nullptr};
  return bisect_zero(sys, band, options, DimensionKind::AffinityDim);
}

DimensionResult solve_shrinking_target_dimension(const AffineSystem& sys,
                                                 const TargetPoint& j,
                                                 const LengthSchedule& sched,
                                                 const SolverOptions& options) {
  if (j.alphabet() != sys.map_count())
    throw input_error("solve_shrinking_target_dimension: target alphabet != map count");
  const LengthSchedule::Limit limit = sched.limit();

  if (limit.kind == LengthSchedule::LimitKind::Infinite) {
    // Superlinear targets kill the recurring set: exact [0, 0].
    require_usable(sys);
    DimensionResult result;
    result.kind = DimensionKind::ShrinkingTargetDim;
    result.regime = Regime::Superlinear;
    return result;
  }

  if (limit.kind == LengthSchedule::LimitKind::Zero && limit.verified) {
    DimensionResult result = solve_affinity_dimension(sys, options);
    result.kind = DimensionKind::ShrinkingTargetDim;
    result.regime = Regime::Sublinear;
    return result;
  }

  BandEvaluator band{sys, options, &j, &sched};
  DimensionResult result =
      bisect_zero(sys, band, options, DimensionKind::ShrinkingTargetDim);
  if (limit.verified) {
    result.regime = Regime::LinearRate;
    result.regime_rate = limit.value;
  } else {
    result.regime = Regime::Unclassified;
    result.heuristic_d = true;  // best-effort: the limit itself is unverified
  }
  return result;
}

std::vector<ProfileRow> pressure_profile(
    const AffineSystem& sys, const std::optional<TargetPoint>& j,
    const std::optional<LengthSchedule>& sched,
    const std::vector<double>& s_grid, const SolverOptions& options) {
  if (j.has_value() != sched.has_value())
    throw input_error("pressure_profile: target and schedule go together");
  const double d = static_cast<double>(sys.dim());
  for (double s : s_grid)
    if (!(s >= 0.0 && s <= d))
      throw input_error("pressure_profile: grid point outside [0, d]");

  BandEvaluator band{sys, options, j ? &*j : nullptr, sched ? &*sched : nullptr};
  const int depth = std::min(
      options.depth,
      max_tree_depth(sys.map_count(), options.tree.max_leaf_products));

  std::vector<ProfileRow> rows;
  rows.reserve(s_grid.size());
  for (double s : s_grid) {
    double chi_shift = 0.0, chi_unc = 0.0;
    if (j) {
      const ChiDiagnostic chi = chi_estimate(sys, s, *j, *sched, band.chi_depth());
      chi_shift = chi.last;
      chi_unc = chi.oscillation;
    }
    const PressureBracket bracket =
        ordinary_pressure(sys, s, depth, options.proven_d, options.tree);
    rows.push_back({s, bracket.lower + chi_shift - chi_unc,
                    bracket.upper + chi_shift + chi_unc});
  }
  return rows;
}

}  // namespace affine_recur
