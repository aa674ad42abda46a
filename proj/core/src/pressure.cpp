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

#include "affine_recur/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "affine_recur/errors.hpp"

namespace affine_recur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Streaming log-sum-exp: exact order of operations, so a fixed visit
// order gives bit-identical results.
struct LseAccumulator {
  double max_log = -kInf;
  double sum = 0.0;

  void add(double v) {
    if (v == -kInf) return;
    if (v <= max_log) {
      sum += std::exp(v - max_log);
    } else {
      sum = sum * std::exp(max_log - v) + 1.0;
      max_log = v;
    }
  }

  void merge(const LseAccumulator& other) {
    if (other.max_log == -kInf) return;
    if (other.max_log <= max_log) {
      sum += other.sum * std::exp(other.max_log - max_log);
    } else {
      sum = sum * std::exp(max_log - other.max_log) + other.sum;
      max_log = other.max_log;
    }
  }

  double value() const {
    if (max_log == -kInf || sum <= 0.0) return -kInf;
    return max_log + std::log(sum);
  }
};

// Raw d x d helpers for the hot traversal path (no allocation per node).
inline void mat_mul(const double* a, const double* b, double* c, int d) {
  for (int r = 0; r < d; ++r) {
    for (int j = 0; j < d; ++j) c[r * d + j] = 0.0;
    for (int k = 0; k < d; ++k) {
      const double v = a[r * d + k];
      if (v == 0.0) continue;
      for (int j = 0; j < d; ++j) c[r * d + j] += v * b[k * d + j];
    }
  }
}

// log phi^t for a raw d=2 matrix: closed-form singular values.
inline double log_phi_raw_2(double t, int whole, double frac, const double* m) {
  const double a = m[0], b = m[1], c = m[2], e = m[3];
  const double b00 = a * a + c * c;
  const double b11 = b * b + e * e;
  const double b01 = a * b + c * e;
  const double tr = b00 + b11;
  const double disc = std::sqrt((b00 - b11) * (b00 - b11) + 4.0 * b01 * b01);
  const double s1 = std::sqrt(std::max(0.0, 0.5 * (tr + disc)));
  if (t == 0.0) return 0.0;
  if (s1 <= 0.0) return -kInf;
  const double log_s1 = std::log(s1);
  if (whole == 0) return frac * log_s1;
  const double det = std::abs(a * e - b * c);
  if (det <= 0.0) return (whole >= 1 && (whole == 2 || frac > 0.0)) ? -kInf : log_s1;
  const double log_s2 = std::log(det) - log_s1;
  if (whole == 1) return log_s1 + frac * log_s2;
  return log_s1 + log_s2;  // whole == 2, frac == 0
}

struct LeafEvaluator {
  int dim;
  int whole;
  double frac;
  double t;
  bool has_suffix;
  std::vector<double> suffix;  // row-major
  double suffix_log_phi_scale;  // t * log_scale of the suffix product

  double eval(const double* prod, double* scratch) const {
    const double* leaf = prod;
    if (has_suffix) {
      mat_mul(prod, suffix.data(), scratch, dim);
      leaf = scratch;
    }
    double v;
    if (dim == 2) {
      v = log_phi_raw_2(t, whole, frac, leaf);
    } else if (dim == 1) {
      const double s = std::abs(leaf[0]);
      v = (s > 0.0) ? t * std::log(s) : (t == 0.0 ? 0.0 : -kInf);
    } else {
      Matrix m(dim, std::vector<double>(leaf, leaf + dim * dim));
      v = log_phi(SvfExponent(t, dim), m);
    }
    return v + suffix_log_phi_scale;
  }
};

// Depth-first sum over the subtree below a fixed prefix product.
void dfs_sum(const AffineSystem& sys, const LeafEvaluator& leaf_eval,
             int remaining, const double* prefix, std::vector<double>& stack,
             double* scratch, LseAccumulator& acc) {
  const int d = sys.dim();
  if (remaining == 0) {
    acc.add(leaf_eval.eval(prefix, scratch));
    return;
  }
  double* slot = stack.data() + static_cast<size_t>(remaining - 1) * d * d;
  for (int letter = 0; letter < sys.map_count(); ++letter) {
    mat_mul(prefix, sys.map(letter).linear.entries().data(), slot, d);
    dfs_sum(sys, leaf_eval, remaining - 1, slot, stack, scratch, acc);
  }
}

}  // namespace

int max_tree_depth(int alphabet, std::int64_t max_leaf_products) {
  int depth = 0;
  std::int64_t leaves = 1;
  while (leaves <= max_leaf_products / alphabet) {
    leaves *= alphabet;
    ++depth;
  }
  return depth;
}

double log_sum_phi(const AffineSystem& sys, double t, int k,
                   const Word& suffix, const TreeOptions& options) {
  if (k < 1) throw input_error("log_sum_phi: k must be >= 1");
  const SvfExponent exponent(t, sys.dim());
  if (k > max_tree_depth(sys.map_count(), options.max_leaf_products)) {
    throw capacity_error(
        "log_sum_phi: depth " + std::to_string(k) + " needs " +
        std::to_string(sys.map_count()) + "^" + std::to_string(k) +
        " leaf products, above the cap " +
        std::to_string(options.max_leaf_products) +
        "; lower the depth or raise TreeOptions::max_leaf_products");
  }

  const int d = sys.dim();
  LeafEvaluator leaf_eval;
  leaf_eval.dim = d;
  leaf_eval.t = t;
  leaf_eval.whole = exponent.whole();
  leaf_eval.frac = exponent.frac();
  leaf_eval.has_suffix = !suffix.is_empty();
  leaf_eval.suffix_log_phi_scale = 0.0;
  if (leaf_eval.has_suffix) {
    if (suffix.alphabet() != sys.map_count())
      throw input_error("log_sum_phi: suffix alphabet != map count");
    ScaledMatrix sm(d);
    for (std::int64_t i = 0; i < suffix.length(); ++i)
      sm.push_right(sys.map(suffix.letter(i)).linear);
    leaf_eval.suffix = sm.mat.entries();
    leaf_eval.suffix_log_phi_scale = t * sm.log_scale;
  }

  // Fixed split depth: smallest p with m^p >= subtree_target (capped by
  // k). Independent of the thread count so reductions are canonical.
  const int m = sys.map_count();
  int split = 0;
  std::int64_t subtrees = 1;
  while (subtrees < options.subtree_target && split < k) {
    subtrees *= m;
    ++split;
  }

  // Enumerate the split prefixes in lexicographic order.
  std::vector<std::vector<double>> prefixes;
  prefixes.reserve(static_cast<size_t>(subtrees));
  {
    std::vector<int> digits(static_cast<size_t>(split), 0);
    std::vector<double> prod(static_cast<size_t>(d) * d);
    bool done = false;
    while (!done) {
      // product for this prefix
      std::vector<double> acc(static_cast<size_t>(d) * d, 0.0);
      for (int i = 0; i < d; ++i) acc[static_cast<size_t>(i) * d + i] = 1.0;
      for (int pos = 0; pos < split; ++pos) {
        mat_mul(acc.data(), sys.map(digits[static_cast<size_t>(pos)]).linear.entries().data(),
                prod.data(), d);
        acc = prod;
      }
      prefixes.push_back(acc);
      done = true;
      for (int pos = split - 1; pos >= 0; --pos) {
        if (++digits[static_cast<size_t>(pos)] < m) {
          done = false;
          break;
        }
        digits[static_cast<size_t>(pos)] = 0;
      }
      if (split == 0) break;
    }
  }

  const int remaining = k - split;
  std::vector<LseAccumulator> partials(prefixes.size());
  auto run_range = [&](size_t begin, size_t end) {
    std::vector<double> stack(static_cast<size_t>(std::max(remaining, 1)) * d * d);
    std::vector<double> scratch(static_cast<size_t>(d) * d);
    for (size_t i = begin; i < end; ++i) {
      dfs_sum(sys, leaf_eval, remaining, prefixes[i].data(), stack,
              scratch.data(), partials[i]);
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1 || prefixes.size() <= 1) {
    run_range(0, prefixes.size());
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      std::vector<double> stack(static_cast<size_t>(std::max(remaining, 1)) * d * d);
      std::vector<double> scratch(static_cast<size_t>(d) * d);
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= prefixes.size()) return;
        dfs_sum(sys, leaf_eval, remaining, prefixes[i].data(), stack,
                scratch.data(), partials[i]);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  LseAccumulator total;
  for (const LseAccumulator& p : partials) total.merge(p);
  return total.value();
}

QuasiMultConstant resolve_quasimult_constant(const AffineSystem& sys, double t,
                                             std::optional<double> proven_d,
                                             const TreeOptions& options) {
  if (proven_d) {
    if (!(*proven_d > 0.0) || *proven_d > 1.0)
      throw input_error("quasimultiplicativity constant must be in (0, 1]");
    return {*proven_d, false};
  }
  if (sys.is_conformal() || sys.is_aligned_diagonal()) {
    // phi^t is exactly multiplicative for these families.
    return {1.0, false};
  }
  const int depth = std::min(4, max_tree_depth(sys.map_count(),
                                               options.d_sample_budget));
  const QuasiMultReport report =
      estimate_D(sys, t, std::max(1, depth), options.d_sample_budget);
  return {report.d_estimate, true};
}

PressureBracket ordinary_pressure(const AffineSystem& sys, double t, int depth,
                                  std::optional<double> proven_d,
                                  const TreeOptions& options) {
  if (depth < 1) throw input_error("ordinary_pressure: depth must be >= 1");
  const QuasiMultConstant d_const =
      resolve_quasimult_constant(sys, t, proven_d, options);
  const double log_d = std::log(d_const.value);

  PressureBracket bracket;
  bracket.t = t;
  bracket.depth = depth;
  bracket.heuristic_d = d_const.heuristic;
  bracket.d_used = d_const.value;
  bracket.upper = kInf;
  bracket.lower = -kInf;
  for (int j = 1; j <= depth; ++j) {
    const double s_j = log_sum_phi(sys, t, j, Word::empty(sys.map_count()), options);
    bracket.upper = std::min(bracket.upper, s_j / j);
    bracket.lower = std::max(bracket.lower, (log_d + s_j) / j);
  }
  // A sampled D over-estimates the true infimum, so a crossing here can
  // only mean the heuristic constant was wrong; keep the invariant.
  if (bracket.lower > bracket.upper) bracket.lower = bracket.upper;
  return bracket;
}

ChiDiagnostic chi_estimate(const AffineSystem& sys, double s,
                           const TargetPoint& j, const LengthSchedule& sched,
                           std::int64_t depth, std::int64_t max_letters) {
  if (depth < 1) throw input_error("chi_estimate: depth must be >= 1");
  SvfExponent(s, sys.dim());  // domain check
  if (j.alphabet() != sys.map_count())
    throw input_error("chi_estimate: target alphabet != map count");
  if (sched.at(depth) > max_letters) {
    throw capacity_error(
        "chi_estimate: ell_depth = " + std::to_string(sched.at(depth)) +
        " letters exceeds the cap " + std::to_string(max_letters) +
        "; lower the depth or raise max_letters");
  }

  ChiDiagnostic diag;
  diag.ks.reserve(static_cast<size_t>(depth));
  diag.values.reserve(static_cast<size_t>(depth));
  CocycleAccumulator acc(sys.dim());
  for (std::int64_t k = 1; k <= depth; ++k) {
    const std::int64_t ell = sched.at(k);
    while (acc.length() < ell)
      acc.push_right(sys.map(j.letter_at(acc.length())).linear);
    diag.ks.push_back(k);
    diag.values.push_back(acc.log_phi(s) / static_cast<double>(k));
  }
  diag.last = diag.values.back();

  const size_t n = diag.values.size();
  const size_t tail_start = (n >= 8) ? (3 * n) / 4 : 0;
  double lo = kInf, hi = -kInf;
  for (size_t i = tail_start; i < n; ++i) {
    lo = std::min(lo, diag.values[i]);
    hi = std::max(hi, diag.values[i]);
  }
  diag.oscillation = hi - lo;
  return diag;
}

ModifiedPressureEstimate modified_pressure(const AffineSystem& sys, double s,
                                           const TargetPoint& j,
                                           const LengthSchedule& sched,
                                           int depth,
                                           std::optional<double> proven_d,
                                           const TreeOptions& options) {
  if (depth < 1) throw input_error("modified_pressure: depth must be >= 1");
  ModifiedPressureEstimate est;
  est.s = s;
  est.depth = depth;
  est.chi = chi_estimate(sys, s, j, sched, depth);
  est.chi_at_depth = est.chi.last;

  const Word suffix = j.truncate(sched.at(depth));
  est.direct_value =
      log_sum_phi(sys, s, depth, suffix, options) / static_cast<double>(depth);
  est.ordinary = ordinary_pressure(sys, s, depth, proven_d, options);

  est.corridor = est.ordinary.width() +
                 std::abs(std::log(est.ordinary.d_used)) / depth;
  const double decomposed = est.ordinary.midpoint() + est.chi_at_depth;
  est.corridor_ok =
      std::abs(est.direct_value - decomposed) <= est.corridor + 1e-9;
  return est;
}

}  // namespace affine_recur
