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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "affine_recur/errors.hpp"
#include "affine_recur/symbolic.hpp"
#include "doctest.h"

using affine_recur::input_error;
using affine_recur::LengthSchedule;
using affine_recur::recurrence_hit;
using affine_recur::TargetPoint;
using affine_recur::Word;

namespace {
Word w(std::vector<std::uint8_t> letters, int m = 3) {
  return Word(std::move(letters), m);
}
}  // namespace

TEST_CASE("word validation and basics") {
  CHECK_THROWS_AS(Word({3}, 3), input_error);
  CHECK(Word::empty(2).length() == 0);
  CHECK(w({0, 1, 2}).concat(w({2})) == w({0, 1, 2, 2}));
  CHECK(w({0, 1, 2}).prefix(2) == w({0, 1}));
  CHECK(w({0, 1}).to_string() == "(0,1)");
}

TEST_CASE("target point truncation") {
  const TargetPoint zeros = TargetPoint::periodic(Word({0}, 2));
  CHECK(zeros.truncate(5) == Word({0, 0, 0, 0, 0}, 2));
  CHECK(zeros.truncate(0).is_empty());

  const TargetPoint mixed =
      TargetPoint::eventually_periodic(w({1}), w({0, 2}));
  CHECK(mixed.truncate(4) == w({1, 0, 2, 0}));
  CHECK(mixed.truncate(7) == w({1, 0, 2, 0, 2, 0, 2}));
}

TEST_CASE("truncations are nested prefixes") {
  const TargetPoint sampled = TargetPoint::sampled(987, 4);
  for (int n = 0; n < 40; ++n) {
    const Word shorter = sampled.truncate(n);
    const Word longer = sampled.truncate(n + 1);
    CHECK(longer.prefix(n) == shorter);
  }
  // same seed, same letters
  const TargetPoint again = TargetPoint::sampled(987, 4);
  CHECK(again.truncate(40) == sampled.truncate(40));
}

TEST_CASE("schedule values") {
  CHECK(LengthSchedule::linear(1.0).at(7) == 7);
  CHECK(LengthSchedule::linear(0.5).at(4) == 2);
  CHECK(LengthSchedule::linear(0.5).at(5) == 3);
  CHECK(LengthSchedule::power(2.0).at(5) == 25);
  CHECK(LengthSchedule::power(0.5).at(9) == 3);
  CHECK(LengthSchedule::log2(1.0).at(8) == 3);
  CHECK(LengthSchedule::log2(1.0).at(1) == 1);  // clamped to stay positive
  const auto expl = LengthSchedule::explicit_list({1, 1, 2, 5});
  CHECK(expl.at(3) == 2);
  CHECK(expl.at(9) == 5);
  CHECK(expl.extends_beyond(9));
  CHECK(!expl.extends_beyond(4));
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(LengthSchedule::linear(0.0), input_error);
  CHECK_THROWS_AS(LengthSchedule::power(1.0), input_error);
  CHECK_THROWS_AS(LengthSchedule::explicit_list({2, 1}), input_error);
  CHECK_THROWS_AS(LengthSchedule::explicit_list({0}), input_error);
  CHECK_THROWS_AS(LengthSchedule::linear(1.0).at(0), input_error);
}

TEST_CASE("schedules never decrease") {
  for (const auto& sched :
       {LengthSchedule::linear(0.37), LengthSchedule::power(1.7),
        LengthSchedule::power(0.31), LengthSchedule::log2(2.4)}) {
    for (std::int64_t k = 1; k < 2000; ++k) {
      CHECK(sched.at(k + 1) >= sched.at(k));
    }
  }
}

TEST_CASE("linear schedules track their slope to within 1/k") {
  for (double slope : {0.3, 0.5, 1.0, 1.1, 2.0, 3.7}) {
    const auto sched = LengthSchedule::linear(slope);
    for (std::int64_t k = 1; k <= 1000; ++k) {
      const double ratio = static_cast<double>(sched.at(k)) / k;
      CHECK(std::abs(ratio - slope) <= 1.0 / k + 1e-12);
    }
  }
}

TEST_CASE("limit classification") {
  auto limit = LengthSchedule::linear(0.5).limit();
  CHECK(limit.kind == LengthSchedule::LimitKind::Finite);
  CHECK(limit.value == doctest::Approx(0.5));
  CHECK(limit.verified);

  CHECK(LengthSchedule::power(3.0).limit().kind ==
        LengthSchedule::LimitKind::Infinite);
  CHECK(LengthSchedule::power(0.5).limit().kind ==
        LengthSchedule::LimitKind::Zero);
  CHECK(LengthSchedule::log2(10.0).limit().kind ==
        LengthSchedule::LimitKind::Zero);

  CHECK(!LengthSchedule::explicit_list({1, 2, 3}).limit().verified);
}

TEST_CASE("recurrence hit semantics") {
  const TargetPoint zeros = TargetPoint::periodic(Word({0}, 2));
  const auto two = LengthSchedule::explicit_list({2, 2, 2, 2});
  CHECK(recurrence_hit(Word({0, 0, 0, 0}, 2), 1, zeros, two));
  CHECK(!recurrence_hit(Word({0, 1, 0, 0}, 2), 1, zeros, two));
  // k = 0 uses ell_1 and matches the prefix directly
  CHECK(recurrence_hit(Word({0, 0, 1, 1}, 2), 0, zeros, two));
  CHECK(!recurrence_hit(Word({1, 0, 1, 1}, 2), 0, zeros, two));
  CHECK_THROWS_AS(recurrence_hit(Word({0, 0}, 2), 1, zeros, two), input_error);
}
