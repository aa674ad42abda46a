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
// The affine iterated function system data model: maps f_i(x) = T_i x + a_i,
// hypothesis validation, quasimultiplicativity constant estimation, planar
// cone-condition certificates, and the symbolic-to-geometric projection.

#ifndef AFFINE_RECUR_IFS_HPP_
#define AFFINE_RECUR_IFS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affine_recur/svf.hpp"
#include "affine_recur/symbolic.hpp"

namespace affine_recur {

/// One affine contraction: x -> linear x + translation.
struct AffineContraction {
  Matrix linear;
  std::vector<double> translation;

  AffineContraction(Matrix lin, std::vector<double> trans);
};

/// The full system {f_1, ..., f_m}, m >= 2, all maps of equal dimension.
/// Construction enforces structure (finiteness, matching dims); the
/// mathematical hypotheses (bijective, contracting, sigma_1 < 1/2 in
/// strict mode) are checked by validate() so that out-of-hypothesis
/// systems can still be examined and reported on.
class AffineSystem {
 public:
  AffineSystem(std::vector<AffineContraction> maps, bool strict = true);

  int dim() const { return dim_; }
  int map_count() const { return static_cast<int>(maps_.size()); }
  bool strict() const { return strict_; }
  const AffineContraction& map(int i) const { return maps_[static_cast<size_t>(i)]; }

  /// max_i sigma_1(T_i) and min_i sigma_d(T_i), cached at construction.
  double sigma_plus() const { return sigma_plus_; }
  double sigma_minus() const { return sigma_minus_; }
  const SingularSpectrum& spectrum(int i) const { return spectra_[static_cast<size_t>(i)]; }

  /// Every map a similarity (sigma_1 == sigma_d within tol). Products of
  /// similarities are similarities, so phi^t is exactly multiplicative.
  bool is_conformal(double tol = 1e-12) const;

  /// Every map diagonal with |entry_1| >= |entry_2| >= ... in the same
  /// coordinate order; such families are also exactly multiplicative.
  bool is_aligned_diagonal() const;

  /// Smallest M with f_i(B(0,M)) inside B(0,M) for all i:
  /// max_i |a_i| / (1 - sigma_1(T_i)). Meaningful only for contractions.
  double invariant_ball_radius() const;

 private:
  std::vector<AffineContraction> maps_;
  std::vector<SingularSpectrum> spectra_;
  int dim_;
  bool strict_;
  double sigma_plus_;
  double sigma_minus_;
};

struct ValidationIssue {
  int map_index;        // -1 for system-level issues
  bool strict_only;     // violated only under the strict sigma_1 < 1/2 rule
  std::string rule;     // short machine identifier, e.g. "sigma1_lt_half"
  std::string message;
};

struct MapStats {
  double sigma1;
  double sigma_d;
  double det;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::vector<MapStats> per_map;

  bool clean(bool strict) const {
    for (const auto& issue : issues)
      if (strict || !issue.strict_only) return false;
    return true;
  }
};

/// Checks the working hypotheses (bijective, contracting, and the strict
/// sigma_1 < 1/2 bound) map by map; never throws, never mutates.
ValidationReport validate(const AffineSystem& sys);

/// T_{w_1} T_{w_2} ... T_{w_k}; empty word gives the identity.
Matrix word_cocycle(const AffineSystem& sys, const Word& w);

/// Estimated quasimultiplicativity constant
///   D = min over word pairs of phi^t(T_{uv}) / (phi^t(T_u) phi^t(T_v)).
/// Exhaustive over all pairs with |u|,|v| <= depth when that pair count
/// fits the budget, otherwise uniformly sampled. A sampled (and even an
/// exhaustive finite-depth) minimum over-estimates the true infimum, so
/// the result is heuristic unless multiplicativity is structural.
struct QuasiMultReport {
  double t = 0.0;
  int depth = 0;
  double d_estimate = 1.0;
  bool exhaustive = false;
  Word worst_left;
  Word worst_right;
};

QuasiMultReport estimate_D(const AffineSystem& sys, double t, int depth,
                           std::int64_t sample_budget);

/// A closed projective-direction interval [start, start + width] (radians
/// mod pi, width < pi) verified to be mapped strictly inside itself by
/// every linear part.
struct ProjectiveCone {
  double start;
  double width;
  double margin;  // smallest clearance achieved, in radians
};

/// Searches for a cone certificate at the given angular resolution
/// (grid step pi / resolution). Returns nullopt when no certificate was
/// found; that is not a proof that none exists. Requires d = 2.
std::optional<ProjectiveCone> cone_check_2d(const std::vector<Matrix>& linear_parts,
                                            int angular_resolution);
std::optional<ProjectiveCone> cone_check_2d(const AffineSystem& sys,
                                            int angular_resolution);

/// Re-verifies a candidate cone at a given resolution (margin must be at
/// least one grid step). Endpoint checking is sound because invertible
/// 2x2 maps act monotonically on projective intervals.
bool cone_verify(const std::vector<Matrix>& linear_parts,
                 const ProjectiveCone& cone, int angular_resolution);

/// f_{w_1} o ... o f_{w_k}(0) plus the radius sigma_+^{|w|} M_ball that
/// bounds the distance to pi(x) for any infinite extension x of w.
struct ProjectedPoint {
  std::vector<double> point;
  double error_radius;
};

ProjectedPoint project_word(const AffineSystem& sys, const Word& w);

}  // namespace affine_recur

#endif  // AFFINE_RECUR_IFS_HPP_
