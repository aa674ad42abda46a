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
// Finite-depth pressure estimation with two-sided brackets.
//
// Write S_k(t) = log sum over words i of length k of phi^t(T_i B), B an
// optional suffix product. Submultiplicativity of phi^t makes S_k
// subadditive, so S_k / k is a certified upper bound for the pressure at
// every k (Fekete). Quasimultiplicativity with constant D makes
// log D + S_k superadditive, so (log D + S_k) / k is a certified lower
// bound. Both converge at rate |log D| / k; for exactly multiplicative
// families (similarities, aligned diagonal maps) D = 1 and the bracket
// closes at depth 1.

#ifndef AFFINE_RECUR_PRESSURE_HPP_
#define AFFINE_RECUR_PRESSURE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "affine_recur/ifs.hpp"
#include "affine_recur/svf.hpp"
#include "affine_recur/symbolic.hpp"

namespace affine_recur {

/// Work limits and determinism knobs for word-tree sums.
struct TreeOptions {
  /// Cap on m^k leaf products per tree pass.
  std::int64_t max_leaf_products = std::int64_t{1} << 26;
  /// Worker threads. Results are byte-identical for every thread count:
  /// the tree is always split at the same fixed prefix depth (the
  /// smallest p with m^p >= subtree_target) and subtree partials are
  /// combined in lexicographic order.
  int threads = 1;
  int subtree_target = 64;
  /// Budget used when a quasimultiplicativity constant must be estimated.
  std::int64_t d_sample_budget = 20000;
};

/// Largest depth k with m^k within the leaf cap.
int max_tree_depth(int alphabet, std::int64_t max_leaf_products);

/// log sum over |i| = k of phi^t(T_i T_suffix), by depth-first traversal
/// of the m-ary word tree carrying the running product, reduced with a
/// streaming log-sum-exp. Deterministic for fixed options; throws
/// capacity_error when m^k exceeds the leaf cap.
double log_sum_phi(const AffineSystem& sys, double t, int k,
                   const Word& suffix, const TreeOptions& options = {});

/// Certified two-sided bracket for the ordinary pressure at one t.
struct PressureBracket {
  double t = 0.0;
  int depth = 0;
  double lower = 0.0;
  double upper = 0.0;
  /// True when the lower bound rests on a sampled (unproven) D.
  bool heuristic_d = false;
  /// The D that was used.
  double d_used = 1.0;

  double midpoint() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

/// How the quasimultiplicativity constant was settled for a system:
/// a user-supplied proven constant, the structural D = 1 cases, or a
/// heuristic sampled estimate.
struct QuasiMultConstant {
  double value = 1.0;
  bool heuristic = false;
};

QuasiMultConstant resolve_quasimult_constant(const AffineSystem& sys, double t,
                                             std::optional<double> proven_d,
                                             const TreeOptions& options = {});

/// Bracket from all partition sums S_j, j = 1..depth:
/// upper = min_j S_j / j, lower = max_j (log D + S_j) / j.
PressureBracket ordinary_pressure(const AffineSystem& sys, double t, int depth,
                                  std::optional<double> proven_d = std::nullopt,
                                  const TreeOptions& options = {});

/// chi_k = (1/k) log phi^s(T_{j|ell_k}) for k = 1..depth, computed in one
/// incremental pass (cost O(ell_depth) matrix pushes). The limit exists
/// by the subadditive ergodic theorem but comes with no rate, so only
/// the finite sequence and its tail oscillation are reported.
struct ChiDiagnostic {
  std::vector<std::int64_t> ks;
  std::vector<double> values;
  double last = 0.0;          // chi at the deepest k
  double oscillation = 0.0;   // max - min over the last quarter of depths
};

ChiDiagnostic chi_estimate(const AffineSystem& sys, double s,
                           const TargetPoint& j, const LengthSchedule& sched,
                           std::int64_t depth,
                           std::int64_t max_letters = std::int64_t{1} << 22);

/// The modified pressure at finite depth: the direct partition value
/// (suffix j|_{ell_k} inside the sum) next to its decomposition into
/// ordinary pressure plus chi. When quasimultiplicativity holds with
/// constant D, both the direct value and bracket-midpoint + chi_k lie in
/// an interval of width |log D|/k around each other (plus the bracket
/// width), which is the consistency corridor checked here.
struct ModifiedPressureEstimate {
  double s = 0.0;
  int depth = 0;
  double direct_value = 0.0;
  PressureBracket ordinary;
  double chi_at_depth = 0.0;
  ChiDiagnostic chi;
  double corridor = 0.0;      // bracket width + |log D| / depth
  bool corridor_ok = true;    // |direct - (midpoint + chi_k)| <= corridor (+eps)
};

ModifiedPressureEstimate modified_pressure(
    const AffineSystem& sys, double s, const TargetPoint& j,
    const LengthSchedule& sched, int depth,
    std::optional<double> proven_d = std::nullopt,
    const TreeOptions& options = {});

}  // namespace affine_recur

#endif  // AFFINE_RECUR_PRESSURE_HPP_
