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

#include "affine_recur/symbolic.hpp"

#include <cmath>

#include "affine_recur/errors.hpp"
#include "affine_recur/prng.hpp"

namespace affine_recur {

namespace {

// Largest schedule value we will represent; anything bigger cannot be
// used downstream anyway (letter budgets are far smaller).
constexpr double kScheduleCap = 4.0e18;

// Guard against products like 1.1 * 10 = 11.000000000000002 pushing a
// ceil one step too far (and symmetrically for floor).
std::int64_t guarded_ceil(double v) {
  if (!(v < kScheduleCap))
    throw capacity_error("LengthSchedule: value overflows the representable range");
  return static_cast<std::int64_t>(
      std::ceil(v - 1e-9 * std::max(1.0, std::abs(v))));
}

std::int64_t guarded_floor(double v) {
  if (!(v < kScheduleCap))
    throw capacity_error("LengthSchedule: value overflows the representable range");
  return static_cast<std::int64_t>(
      std::floor(v + 1e-9 * std::max(1.0, std::abs(v))));
}

}  // namespace

Word::Word(std::vector<std::uint8_t> letters, int alphabet)
    : letters_(std::move(letters)), alphabet_(alphabet) {
  if (alphabet < 0 || alphabet > 256)
    throw input_error("Word: alphabet size out of range");
  for (std::uint8_t l : letters_) {
    if (l >= alphabet_)
      throw input_error("Word: letter out of alphabet range");
  }
}

Word Word::concat(const Word& other) const {
  if (alphabet_ != other.alphabet_ && !is_empty() && !other.is_empty())
    throw input_error("Word::concat: alphabet mismatch");
  std::vector<std::uint8_t> combined = letters_;
  combined.insert(combined.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(combined), alphabet_ ? alphabet_ : other.alphabet_);
}

Word Word::prefix(std::int64_t n) const {
  if (n < 0 || n > length()) throw input_error("Word::prefix: bad length");
  return Word(std::vector<std::uint8_t>(letters_.begin(), letters_.begin() + n),
              alphabet_);
}

Word Word::appended(int letter) const {
  if (letter < 0 || letter >= alphabet_)
    throw input_error("Word::appended: letter out of range");
  std::vector<std::uint8_t> combined = letters_;
  combined.push_back(static_cast<std::uint8_t>(letter));
  return Word(std::move(combined), alphabet_);
}

std::string Word::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(static_cast<int>(letters_[i]));
  }
  s += ")";
  return s;
}

TargetPoint TargetPoint::eventually_periodic(Word preperiod, Word period) {
  if (period.is_empty())
    throw input_error("TargetPoint: period must be non-empty");
  if (!preperiod.is_empty() && preperiod.alphabet() != period.alphabet())
    throw input_error("TargetPoint: alphabet mismatch");
  TargetPoint t;
  t.sampled_ = false;
  t.alphabet_ = period.alphabet();
  t.preperiod_ = std::move(preperiod);
  t.period_ = std::move(period);
  return t;
}

TargetPoint TargetPoint::sampled(std::uint64_t seed, int alphabet) {
  if (alphabet < 2) throw input_error("TargetPoint: alphabet must be >= 2");
  TargetPoint t;
  t.sampled_ = true;
  t.seed_ = seed;
  t.alphabet_ = alphabet;
  return t;
}

int TargetPoint::letter_at(std::int64_t index) const {
  if (index < 0) throw input_error("TargetPoint::letter_at: negative index");
  if (sampled_) {
    return static_cast<int>(mix_u64(seed_, static_cast<std::uint64_t>(index)) %
                            static_cast<std::uint64_t>(alphabet_));
  }
  const std::int64_t pre = preperiod_.length();
  if (index < pre) return preperiod_.letter(index);
  return period_.letter((index - pre) % period_.length());
}

Word TargetPoint::truncate(std::int64_t n) const {
  if (n < 0) throw input_error("TargetPoint::truncate: negative length");
  std::vector<std::uint8_t> letters(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    letters[static_cast<size_t>(i)] = static_cast<std::uint8_t>(letter_at(i));
  return Word(std::move(letters), alphabet_);
}

LengthSchedule LengthSchedule::linear(double slope) {
  if (!(slope > 0.0) || !std::isfinite(slope))
    throw input_error("LengthSchedule::linear: L must be > 0");
  return LengthSchedule(Kind::Linear, slope, {});
}

LengthSchedule LengthSchedule::power(double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent) || exponent == 1.0)
    throw input_error("LengthSchedule::power: alpha must be > 0 and != 1");
  return LengthSchedule(Kind::Power, exponent, {});
}

LengthSchedule LengthSchedule::log2(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw input_error("LengthSchedule::log2: c must be > 0");
  return LengthSchedule(Kind::Log, factor, {});
}

LengthSchedule LengthSchedule::explicit_list(std::vector<std::int64_t> values) {
  if (values.empty())
    throw input_error("LengthSchedule::explicit_list: empty list");
  std::int64_t prev = 0;
  for (std::int64_t v : values) {
    if (v < 1) throw input_error("LengthSchedule: values must be positive");
    if (v < prev) throw input_error("LengthSchedule: values must not decrease");
    prev = v;
  }
  return LengthSchedule(Kind::Explicit, 0.0, std::move(values));
}

std::int64_t LengthSchedule::at(std::int64_t k) const {
  if (k < 1) throw input_error("LengthSchedule::at: k must be >= 1");
  switch (kind_) {
    case Kind::Linear:
      return std::max<std::int64_t>(1, guarded_ceil(param_ * static_cast<double>(k)));
    case Kind::Power:
      return std::max<std::int64_t>(
          1, guarded_ceil(std::pow(static_cast<double>(k), param_)));
    case Kind::Log:
      return std::max<std::int64_t>(
          1, guarded_floor(param_ * std::log2(static_cast<double>(k))));
    case Kind::Explicit:
      if (k <= static_cast<std::int64_t>(values_.size()))
        return values_[static_cast<size_t>(k - 1)];
      return values_.back();
  }
  throw input_error("LengthSchedule::at: unreachable");
}

bool LengthSchedule::extends_beyond(std::int64_t k) const {
  return kind_ == Kind::Explicit &&
         k > static_cast<std::int64_t>(values_.size());
}

LengthSchedule::Limit LengthSchedule::limit() const {
  switch (kind_) {
    case Kind::Linear:
      return {LimitKind::Finite, param_, true};
    case Kind::Power:
      if (param_ < 1.0) return {LimitKind::Zero, 0.0, true};
      return {LimitKind::Infinite, 0.0, true};
    case Kind::Log:
      return {LimitKind::Zero, 0.0, true};
    case Kind::Explicit: {
      // Empirical: a repeated last value means ell_k/k -> 0. Within the
      // list, look at the tail ratio. Either way this is not a proof.
      const std::int64_t n = static_cast<std::int64_t>(values_.size());
      const double tail_ratio =
          static_cast<double>(values_.back()) / static_cast<double>(n);
      if (tail_ratio < 0.05) return {LimitKind::Zero, 0.0, false};
      return {LimitKind::Finite, tail_ratio, false};
    }
  }
  throw input_error("LengthSchedule::limit: unreachable");
}

bool recurrence_hit(const Word& i_prefix, std::int64_t k,
                    const TargetPoint& j, const LengthSchedule& sched) {
  if (k < 0) throw input_error("recurrence_hit: k must be >= 0");
  const std::int64_t ell = sched.at(std::max<std::int64_t>(k, 1));
  if (i_prefix.length() < k + ell)
    throw input_error("recurrence_hit: prefix shorter than k + ell_k");
  for (std::int64_t p = 0; p < ell; ++p) {
    if (i_prefix.letter(k + p) != j.letter_at(p)) return false;
  }
  return true;
}

}  // namespace affine_recur
