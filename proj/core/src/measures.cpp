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

#include "affine_recur/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "affine_recur/errors.hpp"

namespace affine_recur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Lse {
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
  double value() const {
    return (max_log == -kInf || sum <= 0.0) ? -kInf : max_log + std::log(sum);
  }
};

// log sum of phi^t over words extending `prod` (already |prefix| letters
// deep at tree position `pos`) to full length `level`, honoring forced
// letters.
double constrained_subtree_sum(const AffineSystem& sys, double t,
                               const std::vector<int>& forced,
                               std::int64_t pos, std::int64_t level,
                               const Matrix& prod) {
  if (pos == level) return log_phi(t, prod);
  Lse acc;
  const int lock = forced[static_cast<size_t>(pos)];
  if (lock >= 0) {
    acc.add(constrained_subtree_sum(sys, t, forced, pos + 1, level,
                                    prod * sys.map(lock).linear));
  } else {
    for (int letter = 0; letter < sys.map_count(); ++letter) {
      acc.add(constrained_subtree_sum(sys, t, forced, pos + 1, level,
                                      prod * sys.map(letter).linear));
    }
  }
  return acc.value();
}

std::int64_t count_free(const std::vector<int>& forced, std::int64_t from,
                        std::int64_t to) {
  std::int64_t n = 0;
  for (std::int64_t p = from; p < to; ++p)
    if (forced[static_cast<size_t>(p)] < 0) ++n;
  return n;
}

constexpr std::int64_t kTreeNodeCap = std::int64_t{1} << 24;
constexpr std::int64_t kCacheNodeCap = std::int64_t{1} << 22;

}  // namespace

// Conditional subtree sums for ancestry-ordered sampling: sums_[p][idx]
// is the log sum of phi^t over completions of the prefix with mixed-radix
// index idx at depth p (forced positions have radix 1).
struct CylinderMeasure::TreeCache {
  std::vector<std::vector<double>> sums;  // depth 0..level
  std::vector<std::int64_t> radix;        // per position: 1 or m
};

CylinderMeasure CylinderMeasure::bernoulli(AffineSystem sys,
                                           std::vector<double> weights) {
  if (static_cast<int>(weights.size()) != sys.map_count())
    throw input_error("bernoulli: weight count != map count");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw input_error("bernoulli: weights must be finite and >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw input_error("bernoulli: weights must sum to 1 (within 1e-9)");
  CylinderMeasure mu;
  mu.kind_ = Kind::Bernoulli;
  mu.sys_ = std::make_shared<AffineSystem>(std::move(sys));
  mu.weights_ = weights;
  mu.log_weights_.reserve(weights.size());
  for (double w : weights)
    mu.log_weights_.push_back(w > 0.0 ? std::log(w) : -kInf);
  mu.effective_bernoulli_ = std::move(weights);
  return mu;
}

CylinderMeasure CylinderMeasure::normalized_phi(AffineSystem sys, double t,
                                                int level) {
  if (level < 1) throw input_error("normalized_phi: level must be >= 1");
  SvfExponent(t, sys.dim());
  CylinderMeasure mu;
  mu.kind_ = Kind::NormalizedPhi;
  mu.sys_ = std::make_shared<AffineSystem>(std::move(sys));
  mu.t_ = t;
  mu.level_ = level;
  mu.forced_.assign(static_cast<size_t>(level), -1);

  if (mu.sys_->is_conformal()) {
    // phi^t multiplicative: the level measure is the Bernoulli measure
    // with p_i proportional to sigma_1(T_i)^t, at every level.
    std::vector<double> w(static_cast<size_t>(mu.sys_->map_count()));
    double total = 0.0;
    for (int i = 0; i < mu.sys_->map_count(); ++i) {
      w[static_cast<size_t>(i)] =
          std::pow(mu.sys_->spectrum(i).largest(), t);
      total += w[static_cast<size_t>(i)];
    }
    for (double& x : w) x /= total;
    mu.weights_ = w;
    mu.log_weights_.clear();
    for (double x : w)
      mu.log_weights_.push_back(x > 0.0 ? std::log(x) : -kInf);
    mu.effective_bernoulli_ = std::move(w);
    mu.log_total_ = 0.0;
    return mu;
  }

  if (level > max_tree_depth(mu.sys_->map_count(), kTreeNodeCap))
    throw capacity_error("normalized_phi: level tree exceeds node cap");
  mu.log_total_ = constrained_subtree_sum(
      *mu.sys_, t, mu.forced_, 0, level, Matrix::identity(mu.sys_->dim()));
  return mu;
}

CylinderMeasure CylinderMeasure::recurrence_constrained(
    AffineSystem sys, double t, std::vector<std::int64_t> times, TargetPoint j,
    LengthSchedule sched, int level) {
  if (level < 1)
    throw input_error("recurrence_constrained: level must be >= 1");
  SvfExponent(t, sys.dim());
  if (j.alphabet() != sys.map_count())
    throw input_error("recurrence_constrained: target alphabet != map count");
  std::int64_t prev = 0;
  std::int64_t prev_ell = 0;
  for (std::int64_t n : times) {
    if (n < 1) throw input_error("recurrence_constrained: times must be >= 1");
    if (prev > 0 && n < prev + prev_ell)
      throw input_error(
          "recurrence_constrained: times must satisfy n_i >= n_{i-1} + ell_{n_{i-1}}");
    prev = n;
    prev_ell = sched.at(n);
  }

  CylinderMeasure mu;
  mu.kind_ = Kind::RecurrenceConstrained;
  mu.sys_ = std::make_shared<AffineSystem>(std::move(sys));
  mu.t_ = t;
  mu.level_ = level;
  mu.times_ = std::move(times);
  mu.forced_.assign(static_cast<size_t>(level), -1);
  // Time n pins positions n+1 .. n+ell_n (1-based) to j|_{ell_n}; clip
  // blocks that stick out past the level (those letters stay free to
  // extend, which is what membership in A(k) asks).
  for (std::int64_t n : mu.times_) {
    const std::int64_t ell = sched.at(n);
    for (std::int64_t p = n; p < std::min<std::int64_t>(level, n + ell); ++p)
      mu.forced_[static_cast<size_t>(p)] = j.letter_at(p - n);
  }

  if (count_free(mu.forced_, 0, level) >
      max_tree_depth(mu.sys_->map_count(), kTreeNodeCap))
    throw capacity_error("recurrence_constrained: constrained tree exceeds node cap");
  mu.log_total_ = constrained_subtree_sum(
      *mu.sys_, t, mu.forced_, 0, level, Matrix::identity(mu.sys_->dim()));
  return mu;
}

std::int64_t CylinderMeasure::resolvable_level() const {
  if (effective_bernoulli_) return std::numeric_limits<std::int64_t>::max();
  return level_;
}

int CylinderMeasure::forced_letter(std::int64_t position) const {
  if (position < 0 || position >= static_cast<std::int64_t>(forced_.size()))
    return -1;
  return forced_[static_cast<size_t>(position)];
}

double CylinderMeasure::log_mass_tree(const Word& q) const {
  // Compatibility with the forced positions decides mass 0, not an error.
  for (std::int64_t p = 0; p < q.length(); ++p) {
    const int lock = forced_[static_cast<size_t>(p)];
    if (lock >= 0 && lock != q.letter(p)) return -kInf;
  }
  if (count_free(forced_, q.length(), level_) >
      max_tree_depth(sys_->map_count(), kTreeNodeCap))
    throw capacity_error("cylinder mass: subtree exceeds node cap");
  const double numerator = constrained_subtree_sum(
      *sys_, t_, forced_, q.length(), level_, word_cocycle(*sys_, q));
  return numerator - log_total_;
}

double CylinderMeasure::log_mass(const Word& q) const {
  if (!q.is_empty() && q.alphabet() != sys_->map_count())
    throw input_error("cylinder mass: word alphabet != map count");
  if (q.length() > resolvable_level())
    throw capacity_error("cylinder mass: level " + std::to_string(q.length()) +
                         " beyond resolvable level " +
                         std::to_string(resolvable_level()));
  if (effective_bernoulli_) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < q.length(); ++i)
      acc += log_weights_[static_cast<size_t>(q.letter(i))];
    return acc;
  }
  return log_mass_tree(q);
}

double CylinderMeasure::mass(const Word& q) const {
  const double lm = log_mass(q);
  return lm == -kInf ? 0.0 : std::exp(lm);
}

std::optional<std::vector<double>> CylinderMeasure::effective_bernoulli() const {
  return effective_bernoulli_;
}

void CylinderMeasure::ensure_cache(std::int64_t need_level) const {
  if (cache_ || effective_bernoulli_) return;
  if (need_level > level_)
    throw capacity_error("sampling needs a prefix beyond the measure level");
  auto cache = std::make_shared<TreeCache>();
  cache->radix.resize(static_cast<size_t>(level_));
  std::int64_t nodes = 1;
  std::int64_t width = 1;
  cache->sums.resize(static_cast<size_t>(level_) + 1);
  cache->sums[0].assign(1, 0.0);
  for (std::int64_t p = 0; p < level_; ++p) {
    cache->radix[static_cast<size_t>(p)] =
        forced_[static_cast<size_t>(p)] >= 0 ? 1 : sys_->map_count();
    width *= cache->radix[static_cast<size_t>(p)];
    nodes += width;
    if (nodes > kCacheNodeCap)
      throw capacity_error("sampling cache exceeds node cap; lower the level");
    cache->sums[static_cast<size_t>(p) + 1].assign(static_cast<size_t>(width), -kInf);
  }

  // Post-order fill: recursive walk carrying (depth, index, product).
  auto fill = [&](auto&& self, std::int64_t pos, std::int64_t idx,
                  const Matrix& prod) -> double {
    if (pos == level_) {
      const double v = log_phi(t_, prod);
      cache->sums[static_cast<size_t>(pos)][static_cast<size_t>(idx)] = v;
      return v;
    }
    Lse acc;
    const int lock = forced_[static_cast<size_t>(pos)];
    const std::int64_t radix = cache->radix[static_cast<size_t>(pos)];
    for (std::int64_t slot = 0; slot < radix; ++slot) {
      const int letter = lock >= 0 ? lock : static_cast<int>(slot);
      acc.add(self(self, pos + 1, idx * radix + slot,
                   prod * sys_->map(letter).linear));
    }
    const double v = acc.value();
    cache->sums[static_cast<size_t>(pos)][static_cast<size_t>(idx)] = v;
    return v;
  };
  fill(fill, 0, 0, Matrix::identity(sys_->dim()));
  cache_ = std::move(cache);
}

std::vector<std::uint8_t> CylinderMeasure::sample_prefix(std::int64_t n,
                                                         SplitMix64& rng) const {
  std::vector<std::uint8_t> letters(static_cast<size_t>(n));
  if (effective_bernoulli_) {
    const std::vector<double>& w = *effective_bernoulli_;
    for (std::int64_t i = 0; i < n; ++i) {
      double u = rng.next_double();
      int letter = 0;
      for (; letter + 1 < static_cast<int>(w.size()); ++letter) {
        u -= w[static_cast<size_t>(letter)];
        if (u < 0.0) break;
      }
      letters[static_cast<size_t>(i)] = static_cast<std::uint8_t>(letter);
    }
    return letters;
  }

  ensure_cache(n);
  std::int64_t idx = 0;
  for (std::int64_t pos = 0; pos < n; ++pos) {
    const int lock = forced_[static_cast<size_t>(pos)];
    const std::int64_t radix = cache_->radix[static_cast<size_t>(pos)];
    const double node = cache_->sums[static_cast<size_t>(pos)][static_cast<size_t>(idx)];
    int chosen = 0;
    if (lock >= 0) {
      chosen = lock;
      idx = idx * radix;  // radix 1
    } else {
      double u = rng.next_double();
      for (int letter = 0; letter < static_cast<int>(radix); ++letter) {
        const double child =
            cache_->sums[static_cast<size_t>(pos) + 1]
                        [static_cast<size_t>(idx * radix + letter)];
        const double p = std::exp(child - node);
        u -= p;
        chosen = letter;
        if (u < 0.0) break;
      }
      idx = idx * radix + chosen;
    }
    letters[static_cast<size_t>(pos)] = static_cast<std::uint8_t>(chosen);
  }
  return letters;
}

std::vector<std::int64_t> greedy_constraint_times(const LengthSchedule& sched,
                                                  std::int64_t first,
                                                  std::int64_t horizon) {
  if (first < 1) throw input_error("greedy_constraint_times: first must be >= 1");
  std::vector<std::int64_t> times;
  std::int64_t n = first;
  while (n <= horizon) {
    times.push_back(n);
    n += sched.at(n);
  }
  return times;
}

double mu_k_mass(const AffineSystem& sys, double t,
                 const std::vector<std::int64_t>& times, const TargetPoint& j,
                 const LengthSchedule& sched, const Word& q, int level) {
  if (q.length() > level)
    throw input_error("mu_k_mass: |q| must be <= the level k");
  const CylinderMeasure mu =
      CylinderMeasure::recurrence_constrained(sys, t, times, j, sched, level);
  return mu.mass(q);
}

double max_mass_phi_ratio(const CylinderMeasure& mu, double t, int max_len) {
  if (max_len < 1) throw input_error("max_mass_phi_ratio: max_len must be >= 1");
  const AffineSystem& sys = mu.system();
  double best = -kInf;
  Word w = Word::empty(sys.map_count());
  auto walk = [&](auto&& self, const Word& q, const Matrix& prod) -> void {
    if (q.length() > 0) {
      const double lm = mu.log_mass(q);
      if (lm != -kInf) {
        best = std::max(best, lm - log_phi(t, prod));
      }
    }
    if (q.length() == max_len) return;
    for (int letter = 0; letter < sys.map_count(); ++letter)
      self(self, q.appended(letter), prod * sys.map(letter).linear);
  };
  walk(walk, w, Matrix::identity(sys.dim()));
  return best == -kInf ? 0.0 : std::exp(best);
}

GibbsReport gibbs_check(const AffineSystem& sys, const CylinderMeasure& mu,
                        double t, const std::vector<int>& sample_levels,
                        std::int64_t budget, const PressureBracket& bracket,
                        std::uint64_t seed) {
  if (sample_levels.empty()) throw input_error("gibbs_check: no levels");
  int max_level = 0;
  std::int64_t exhaustive_count = 0;
  for (int level : sample_levels) {
    if (level < 1) throw input_error("gibbs_check: levels must be >= 1");
    max_level = std::max(max_level, level);
    double c = std::pow(static_cast<double>(sys.map_count()), level);
    exhaustive_count += c > 1e15 ? std::int64_t{1} << 50 : static_cast<std::int64_t>(c);
  }
  if (static_cast<std::int64_t>(max_level) > mu.resolvable_level())
    throw capacity_error("gibbs_check: level beyond the measure resolution");

  GibbsReport report;
  report.t = t;
  report.pressure_at_t = bracket;
  const double p_mid = bracket.midpoint();

  double worst_low = kInf, worst_high = -kInf;
  std::int64_t count = 0;
  std::vector<char> wanted(static_cast<size_t>(max_level) + 1, 0);
  for (int level : sample_levels) wanted[static_cast<size_t>(level)] = 1;

  auto consider = [&](const Word& q, const Matrix& prod) {
    const double lm = mu.log_mass(q);
    if (lm == -kInf) return;  // zero-mass cylinders carry no ratio
    const double log_ratio =
        lm - (log_phi(t, prod) - static_cast<double>(q.length()) * p_mid);
    const double ratio = std::exp(log_ratio);
    worst_low = std::min(worst_low, ratio);
    worst_high = std::max(worst_high, ratio);
    ++count;
  };

  if (exhaustive_count <= budget) {
    report.exhaustive = true;
    auto walk = [&](auto&& self, const Word& q, const Matrix& prod) -> void {
      if (q.length() > 0 && wanted[static_cast<size_t>(q.length())])
        consider(q, prod);
      if (q.length() == max_level) return;
      for (int letter = 0; letter < sys.map_count(); ++letter)
        self(self, q.appended(letter), prod * sys.map(letter).linear);
    };
    walk(walk, Word::empty(sys.map_count()), Matrix::identity(sys.dim()));
  } else {
    SplitMix64 rng(seed);
    const std::int64_t per_level =
        std::max<std::int64_t>(1, budget / static_cast<std::int64_t>(sample_levels.size()));
    for (int level : sample_levels) {
      for (std::int64_t s = 0; s < per_level; ++s) {
        std::vector<std::uint8_t> letters(static_cast<size_t>(level));
        for (auto& l : letters)
          l = static_cast<std::uint8_t>(
              rng.next_below(static_cast<std::uint32_t>(sys.map_count())));
        const Word q(std::move(letters), sys.map_count());
        consider(q, word_cocycle(sys, q));
      }
    }
  }

  report.sampled_cylinders = count;
  if (count == 0) {
    report.worst_ratio_low = report.worst_ratio_high = report.constant_c = 1.0;
    return report;
  }
  report.worst_ratio_low = worst_low;
  report.worst_ratio_high = worst_high;
  // Soundness widening: the true pressure sits anywhere in the bracket,
  // which scales a level-n ratio by up to exp(n * width / 2).
  const double widen = std::exp(0.5 * bracket.width() * max_level);
  report.constant_c =
      std::max(worst_high, worst_low > 0.0 ? 1.0 / worst_low : kInf) * widen;
  return report;
}

namespace {

SeriesClassification classify_series(const CylinderMeasure& mu,
                                     const TargetPoint& j,
                                     const LengthSchedule& sched,
                                     const std::vector<double>& expected_mass) {
  SeriesClassification out;

  // Tail slope of log mass against log k (diagnostic, always reported).
  const size_t n = expected_mass.size();
  if (n >= 8) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (size_t i = (3 * n) / 4; i < n; ++i) {
      if (!(expected_mass[i] > 0.0)) continue;
      const double x = std::log(static_cast<double>(i + 1));
      const double y = std::log(expected_mass[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++count;
    }
    if (count >= 2 && sxx * count - sx * sx > 0)
      out.tail_exponent = (sxy * count - sx * sy) / (sxx * count - sx * sx);
  }

  const auto weights = mu.effective_bernoulli();
  const bool closed_form = weights.has_value() && !j.is_sampled() &&
                           sched.kind() != LengthSchedule::Kind::Explicit;
  if (closed_form) {
    // Mass of [j|_ell] is a product along j's letters; over one period it
    // shrinks by exp(-lambda * period). Any letter of weight zero kills
    // the tail outright.
    const Word& period = j.period();
    bool zero_letter = false;
    for (std::int64_t i = 0; i < j.preperiod().length(); ++i)
      zero_letter |= ((*weights)[static_cast<size_t>(j.preperiod().letter(i))] == 0.0);
    double lambda = 0.0;
    for (std::int64_t i = 0; i < period.length(); ++i) {
      const double p = (*weights)[static_cast<size_t>(period.letter(i))];
      if (p == 0.0) zero_letter = true;
      else lambda -= std::log(p);
    }
    lambda /= static_cast<double>(period.length());
    out.proven = true;
    if (zero_letter) {
      out.kind = SeriesClassification::Kind::Converges;
      return out;
    }
    switch (sched.kind()) {
      case LengthSchedule::Kind::Linear:
      case LengthSchedule::Kind::Power:
        out.kind = lambda > 0.0 ? SeriesClassification::Kind::Converges
                                : SeriesClassification::Kind::Diverges;
        return out;
      case LengthSchedule::Kind::Log: {
        // mass ~ k^{-lambda c / ln 2}
        const double exponent = lambda * sched.parameter() / std::log(2.0);
        out.kind = exponent > 1.0 ? SeriesClassification::Kind::Converges
                                  : SeriesClassification::Kind::Diverges;
        return out;
      }
      case LengthSchedule::Kind::Explicit:
        break;
    }
  }

  out.proven = false;
  if (out.tail_exponent < -1.05)
    out.kind = SeriesClassification::Kind::Converges;
  else if (out.tail_exponent > -0.95)
    out.kind = SeriesClassification::Kind::Diverges;
  else
    out.kind = SeriesClassification::Kind::Inconclusive;
  return out;
}

}  // namespace

SimulationReport simulate_recurrence(const AffineSystem& sys,
                                     const CylinderMeasure& mu,
                                     const TargetPoint& j,
                                     const LengthSchedule& sched,
                                     std::int64_t horizon, std::int64_t samples,
                                     std::uint64_t seed, int threads) {
  if (horizon < 1) throw input_error("simulate_recurrence: horizon must be >= 1");
  if (samples < 1) throw input_error("simulate_recurrence: samples must be >= 1");
  if (j.alphabet() != sys.map_count())
    throw input_error("simulate_recurrence: target alphabet != map count");
  if (mu.alphabet() != sys.map_count())
    throw input_error("simulate_recurrence: measure alphabet != map count");

  SimulationReport report;
  report.horizon = horizon;
  report.samples = samples;
  report.seed = seed;

  std::vector<std::int64_t> ell(static_cast<size_t>(horizon) + 1, 0);
  for (std::int64_t k = 1; k <= horizon; ++k)
    ell[static_cast<size_t>(k)] = sched.at(k);
  const std::int64_t need_len = horizon + ell[static_cast<size_t>(horizon)];
  if (!mu.effective_bernoulli() && need_len > mu.resolvable_level())
    throw capacity_error(
        "simulate_recurrence: sampling needs prefixes of length " +
        std::to_string(need_len) + ", beyond the measure level");

  const Word target_prefix = j.truncate(ell[static_cast<size_t>(horizon)]);

  report.expected_mass.resize(static_cast<size_t>(horizon));
  report.partial_sums.resize(static_cast<size_t>(horizon));
  double running = 0.0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const double m = mu.mass(target_prefix.prefix(ell[static_cast<size_t>(k)]));
    report.expected_mass[static_cast<size_t>(k - 1)] = m;
    running += m;
    report.partial_sums[static_cast<size_t>(k - 1)] = running;
  }

  struct Counters {
    std::vector<std::int64_t> hits;       // per k = 1..K
    std::vector<std::int64_t> last_hit;   // histogram of last hit, 0 = none
  };
  const int n_threads = std::max(1, threads);
  std::vector<Counters> per_thread(static_cast<size_t>(n_threads));
  for (auto& c : per_thread) {
    c.hits.assign(static_cast<size_t>(horizon) + 1, 0);
    c.last_hit.assign(static_cast<size_t>(horizon) + 1, 0);
  }

  auto run_chunk = [&](int which, std::int64_t begin, std::int64_t end) {
    Counters& counters = per_thread[static_cast<size_t>(which)];
    for (std::int64_t idx = begin; idx < end; ++idx) {
      SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(idx));
      const std::vector<std::uint8_t> letters = mu.sample_prefix(need_len, rng);
      std::int64_t last = 0;
      for (std::int64_t k = 1; k <= horizon; ++k) {
        const std::int64_t len = ell[static_cast<size_t>(k)];
        bool hit = true;
        for (std::int64_t p = 0; p < len; ++p) {
          if (letters[static_cast<size_t>(k + p)] !=
              target_prefix.letter(p)) {
            hit = false;
            break;
          }
        }
        if (hit) {
          ++counters.hits[static_cast<size_t>(k)];
          last = k;
        }
      }
      ++counters.last_hit[static_cast<size_t>(last)];
    }
  };

  if (n_threads == 1) {
    run_chunk(0, 0, samples);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (samples + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min(samples, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_chunk, w, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<std::int64_t> hits(static_cast<size_t>(horizon) + 1, 0);
  std::vector<std::int64_t> last_hit(static_cast<size_t>(horizon) + 1, 0);
  for (const auto& c : per_thread) {
    for (size_t i = 0; i < hits.size(); ++i) {
      hits[i] += c.hits[i];
      last_hit[i] += c.last_hit[i];
    }
  }

  report.hit_rate.resize(static_cast<size_t>(horizon));
  for (std::int64_t k = 1; k <= horizon; ++k)
    report.hit_rate[static_cast<size_t>(k - 1)] =
        static_cast<double>(hits[static_cast<size_t>(k)]) /
        static_cast<double>(samples);

  // frac_hit_past[k0] = fraction of samples whose last hit is > k0.
  report.frac_hit_past.resize(static_cast<size_t>(horizon) + 1);
  std::int64_t beyond = 0;
  for (std::int64_t k0 = horizon; k0 >= 0; --k0) {
    if (k0 < horizon) beyond += last_hit[static_cast<size_t>(k0 + 1)];
    report.frac_hit_past[static_cast<size_t>(k0)] =
        static_cast<double>(beyond) / static_cast<double>(samples);
  }

  report.classification = classify_series(mu, j, sched, report.expected_mass);
  return report;
}

EnergyReport energy_diagnostic(const AffineSystem& sys,
                               const CylinderMeasure& mu, double s, double t,
                               int level_cap) {
  if (!(s < t)) throw input_error("energy_diagnostic: requires s < t");
  SvfExponent(s, sys.dim());
  SvfExponent(t, sys.dim());
  if (level_cap < 1) throw input_error("energy_diagnostic: level_cap must be >= 1");
  if (static_cast<std::int64_t>(level_cap) + 1 > mu.resolvable_level())
    throw capacity_error("energy_diagnostic: level_cap beyond measure resolution");

  EnergyReport report;
  report.level_cap = level_cap;
  double h_log = -kInf;
  double total = 0.0;

  // H must dominate mu[w]/phi^t(T_w) for every word that appears in the
  // majorant chain, i.e. up to length level_cap + 1 (the children).
  auto walk = [&](auto&& self, const Word& q, const Matrix& prod) -> void {
    if (q.length() > 0) {
      const double lm = mu.log_mass(q);
      if (lm != -kInf) h_log = std::max(h_log, lm - log_phi(t, prod));
      // sum over i != k of mu[qi] mu[qk] = mu[q]^2 - sum_i mu[qi]^2
      const double mq = lm == -kInf ? 0.0 : std::exp(lm);
      double sq = 0.0;
      for (int letter = 0; letter < sys.map_count(); ++letter) {
        const double child = mu.mass(q.appended(letter));
        sq += child * child;
        if (q.length() == level_cap && child > 0.0) {
          h_log = std::max(h_log,
                           std::log(child) -
                               log_phi(t, prod * sys.map(letter).linear));
        }
      }
      const double cross = std::max(0.0, mq * mq - sq);
      if (cross > 0.0) total += cross * std::exp(-log_phi(s, prod));
    }
    if (q.length() == level_cap) return;
    for (int letter = 0; letter < sys.map_count(); ++letter)
      self(self, q.appended(letter), prod * sys.map(letter).linear);
  };
  walk(walk, Word::empty(sys.map_count()), Matrix::identity(sys.dim()));

  report.truncated_sum = total;
  report.h_empirical = h_log == -kInf ? 0.0 : std::exp(h_log);
  const double g = std::pow(sys.sigma_plus(), t - s);
  report.geometric_bound =
      g < 1.0 ? report.h_empirical * sys.map_count() * g / (1.0 - g) : kInf;
  report.within_bound = report.truncated_sum <= report.geometric_bound * (1.0 + 1e-12);
  return report;
}

}  // namespace affine_recur
