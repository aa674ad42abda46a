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
// Cylinder measures on the symbolic space (Bernoulli products, normalized
// phi^t weights at a finite level, and the recurrence-constrained level
// measures), the Gibbs-property ratio check, the 0-1-law Monte Carlo
// simulation, and the truncated s-energy diagnostic.

#ifndef AFFINE_RECUR_MEASURES_HPP_
#define AFFINE_RECUR_MEASURES_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "affine_recur/ifs.hpp"
#include "affine_recur/pressure.hpp"
#include "affine_recur/prng.hpp"
#include "affine_recur/symbolic.hpp"

namespace affine_recur {

/// A probability assignment to cylinders.
///
///   Bernoulli(p_0..p_{m-1})   product measure, any level resolvable.
///   NormalizedPhi(t, n)       mass of [q] proportional to the sum of
///                             phi^t over extensions of q to length n.
///   RecurrenceConstrained(t, times, j, sched, k)
///                             as NormalizedPhi at level k but summing
///                             only words that agree with j|_{ell_{n_i}}
///                             right after each constraint time n_i.
///
/// Conformal systems make the phi^t weights exactly multiplicative, so
/// NormalizedPhi degenerates to a Bernoulli measure; that case is
/// detected and evaluated in closed form at any depth.
class CylinderMeasure {
 public:
  enum class Kind { Bernoulli, NormalizedPhi, RecurrenceConstrained };

  static CylinderMeasure bernoulli(AffineSystem sys, std::vector<double> weights);
  static CylinderMeasure normalized_phi(AffineSystem sys, double t, int level);
  static CylinderMeasure recurrence_constrained(AffineSystem sys, double t,
                                                std::vector<std::int64_t> times,
                                                TargetPoint j,
                                                LengthSchedule sched, int level);

  Kind kind() const { return kind_; }
  const AffineSystem& system() const { return *sys_; }
  double exponent() const { return t_; }
  int alphabet() const { return sys_->map_count(); }

  /// Deepest cylinder level this measure resolves; Bernoulli (and the
  /// conformal closed form) have no bound.
  std::int64_t resolvable_level() const;

  /// Mass of the cylinder [q]; |q| = 0 gives 1. A word contradicting a
  /// recurrence constraint has mass 0 (not an error). Throws
  /// capacity_error past resolvable_level().
  double mass(const Word& q) const;
  double log_mass(const Word& q) const;

  /// Letters forced by the recurrence constraints at a position, or -1.
  int forced_letter(std::int64_t position) const;

  /// Draw a length-n prefix. Bernoulli draws letters directly; tree
  /// measures walk cached conditional subtree sums (built on first use;
  /// capacity_error when the constrained tree exceeds the node cap).
  std::vector<std::uint8_t> sample_prefix(std::int64_t n, SplitMix64& rng) const;

  /// The Bernoulli weights this measure reduces to, when it does.
  std::optional<std::vector<double>> effective_bernoulli() const;

 private:
  struct TreeCache;
  CylinderMeasure() = default;
  void ensure_cache(std::int64_t need_level) const;
  double log_mass_tree(const Word& q) const;

  Kind kind_ = Kind::Bernoulli;
  std::shared_ptr<const AffineSystem> sys_;
  std::vector<double> weights_;       // Bernoulli
  std::vector<double> log_weights_;
  double t_ = 0.0;
  std::int64_t level_ = 0;
  std::vector<std::int64_t> times_;
  std::vector<int> forced_;           // per position: letter or -1
  double log_total_ = 0.0;            // denominator over level_ words
  std::optional<std::vector<double>> effective_bernoulli_;
  mutable std::shared_ptr<TreeCache> cache_;
};

/// Constraint times for the recurrence-constrained measure, generated
/// greedily from `first` with the spacing n_i >= n_{i-1} + ell_{n_{i-1}},
/// stopping at `horizon`.
std::vector<std::int64_t> greedy_constraint_times(const LengthSchedule& sched,
                                                  std::int64_t first,
                                                  std::int64_t horizon);

/// mu_k mass of [q] for the recurrence-constrained measure (convenience
/// wrapper that builds the measure once per call).
double mu_k_mass(const AffineSystem& sys, double t,
                 const std::vector<std::int64_t>& times, const TargetPoint& j,
                 const LengthSchedule& sched, const Word& q, int level);

/// max over words 1 <= |q| <= max_len of mu[q] / phi^t(T_q).
double max_mass_phi_ratio(const CylinderMeasure& mu, double t, int max_len);

/// Gibbs-property check: ratios mu[q] / (phi^t(T_q) exp(-|q| P(t))) over
/// cylinders of the given levels, exhaustive when the cylinder count fits
/// the budget and uniformly sampled otherwise. constant_C is widened by
/// the pressure-bracket width so the reported constant is sound.
struct GibbsReport {
  double t = 0.0;
  PressureBracket pressure_at_t;
  std::int64_t sampled_cylinders = 0;
  bool exhaustive = false;
  double worst_ratio_low = 1.0;
  double worst_ratio_high = 1.0;
  double constant_c = 1.0;
};

GibbsReport gibbs_check(const AffineSystem& sys, const CylinderMeasure& mu,
                        double t, const std::vector<int>& sample_levels,
                        std::int64_t budget, const PressureBracket& bracket,
                        std::uint64_t seed = 1);

/// Borel-Cantelli simulation report. frac_hit_past[k0] is the fraction
/// of samples with at least one recurrence hit at some k in (k0, K].
struct SeriesClassification {
  enum class Kind { Converges, Diverges, Inconclusive };
  Kind kind = Kind::Inconclusive;
  bool proven = false;     // closed-form schedule/measure combination
  double tail_exponent = 0.0;  // slope of log mass vs log k over the tail
};

struct SimulationReport {
  std::int64_t horizon = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> expected_mass;   // mu[j|ell_k], k = 1..K
  std::vector<double> hit_rate;        // empirical per-k hit frequency
  std::vector<double> frac_hit_past;   // index k0 = 0..K
  std::vector<double> partial_sums;    // running sum of expected_mass
  SeriesClassification classification;
};

SimulationReport simulate_recurrence(const AffineSystem& sys,
                                     const CylinderMeasure& mu,
                                     const TargetPoint& j,
                                     const LengthSchedule& sched,
                                     std::int64_t horizon, std::int64_t samples,
                                     std::uint64_t seed, int threads = 1);

/// Truncated majorant of the s-energy double integral together with its
/// closed geometric bound H m sum_q sigma_+^{q(t-s)}; requires s < t.
struct EnergyReport {
  double truncated_sum = 0.0;
  double geometric_bound = 0.0;
  double h_empirical = 0.0;
  int level_cap = 0;
  bool within_bound = false;
};

EnergyReport energy_diagnostic(const AffineSystem& sys,
                               const CylinderMeasure& mu, double s, double t,
                               int level_cap);

}  // namespace affine_recur

#endif  // AFFINE_RECUR_MEASURES_HPP_
