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
// Shift-space bookkeeping over the full shift on m letters: finite words,
// target points (eventually periodic or seeded-random), and the target
// length schedule ell_k. Positions are 0-based internally; documentation
// and reports use the 1-based convention of the underlying math, so the
// recurrence event at time k reads letters k+1 ... k+ell_k (1-based),
// i.e. indices k ... k+ell_k-1 here.

#ifndef AFFINE_RECUR_SYMBOLIC_HPP_
#define AFFINE_RECUR_SYMBOLIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace affine_recur {

/// Finite word over the alphabet {0, ..., m-1}.
class Word {
 public:
  Word() = default;  // empty word over the empty alphabet (alphabet 0)
  Word(std::vector<std::uint8_t> letters, int alphabet);
  static Word empty(int alphabet) { return Word({}, alphabet); }

  int alphabet() const { return alphabet_; }
  std::int64_t length() const { return static_cast<std::int64_t>(letters_.size()); }
  bool is_empty() const { return letters_.empty(); }
  int letter(std::int64_t i) const { return letters_[static_cast<size_t>(i)]; }
  const std::vector<std::uint8_t>& letters() const { return letters_; }

  Word concat(const Word& other) const;
  Word prefix(std::int64_t n) const;
  Word appended(int letter) const;

  bool operator==(const Word& other) const {
    return letters_ == other.letters_;
  }

  std::string to_string() const;  // e.g. "(0,1,2)"

 private:
  std::vector<std::uint8_t> letters_;
  int alphabet_ = 0;
};

/// The target point j in the sequence space: either eventually periodic
/// (preperiod + nonempty period) or a seeded stream of uniform letters.
/// Truncations are deterministic and O(1)-addressable in both forms.
class TargetPoint {
 public:
  static TargetPoint eventually_periodic(Word preperiod, Word period);
  static TargetPoint periodic(Word period) {
    return eventually_periodic(Word::empty(period.alphabet()), std::move(period));
  }
  static TargetPoint sampled(std::uint64_t seed, int alphabet);

  int alphabet() const { return alphabet_; }
  bool is_sampled() const { return sampled_; }
  std::uint64_t seed() const { return seed_; }
  const Word& preperiod() const { return preperiod_; }
  const Word& period() const { return period_; }

  int letter_at(std::int64_t index) const;  // 0-based
  Word truncate(std::int64_t n) const;

 private:
  TargetPoint() = default;

  bool sampled_ = false;
  std::uint64_t seed_ = 0;
  int alphabet_ = 0;
  Word preperiod_;
  Word period_;
};

/// Non-decreasing positive integer schedule ell_k, k >= 1.
///   Linear{L}:   ell_k = ceil(L k), L > 0
///   Power{a}:    ell_k = ceil(k^a), a > 0, a != 1
///   Log{c}:      ell_k = max(1, floor(c log2 k)), c > 0
///   Explicit:    a given non-decreasing positive list; values beyond the
///                list repeat the last entry (extends_beyond reports it).
class LengthSchedule {
 public:
  enum class Kind { Linear, Power, Log, Explicit };
  enum class LimitKind { Zero, Finite, Infinite };

  struct Limit {
    LimitKind kind;
    double value;    // meaningful for Finite
    bool verified;   // false for Explicit (empirical tail classification)
  };

  static LengthSchedule linear(double slope);
  static LengthSchedule power(double exponent);
  static LengthSchedule log2(double factor);
  static LengthSchedule explicit_list(std::vector<std::int64_t> values);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  const std::vector<std::int64_t>& values() const { return values_; }

  /// ell_k for k >= 1.
  std::int64_t at(std::int64_t k) const;
  /// True when an Explicit schedule was read past its list at index k.
  bool extends_beyond(std::int64_t k) const;

  /// Classification of lim ell_k / k per schedule kind; Explicit is
  /// classified empirically from its tail and marked unverified.
  Limit limit() const;

 private:
  LengthSchedule(Kind kind, double param, std::vector<std::int64_t> values)
      : kind_(kind), param_(param), values_(std::move(values)) {}

  Kind kind_;
  double param_;
  std::vector<std::int64_t> values_;
};

/// True iff letters k+1, ..., k+ell_k (1-based) of i_prefix equal
/// j|_{ell_k}. Requires |i_prefix| >= k + ell_k. The k = 0 boundary uses
/// ell_0 := ell_1 and matches the j-prefix directly.
bool recurrence_hit(const Word& i_prefix, std::int64_t k,
                    const TargetPoint& j, const LengthSchedule& sched);

}  // namespace affine_recur

#endif  // AFFINE_RECUR_SYMBOLIC_HPP_
