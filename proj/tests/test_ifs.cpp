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
#include "affine_recur/ifs.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace affine_recur;

namespace {

AffineSystem thirds_1d() {
  // f0 = x/3, f1 = x/3 + 2/3: the middle-thirds construction on [0, 1]
  std::vector<AffineContraction> maps;
  maps.emplace_back(Matrix(1, {1.0 / 3.0}), std::vector<double>{0.0});
  maps.emplace_back(Matrix(1, {1.0 / 3.0}), std::vector<double>{2.0 / 3.0});
  return AffineSystem(std::move(maps), true);
}

AffineSystem two_similarities(double ratio, bool strict = true) {
  std::vector<AffineContraction> maps;
  maps.emplace_back(oracle::rotation_scale(0.0, ratio),
                    std::vector<double>{0.0, 0.0});
  maps.emplace_back(oracle::rotation_scale(0.9, ratio),
                    std::vector<double>{0.5, 0.25});
  return AffineSystem(std::move(maps), strict);
}

}  // namespace

TEST_CASE("validation: clean strict system") {
  const auto report = validate(two_similarities(1.0 / 3.0));
  CHECK(report.issues.empty());
  CHECK(report.clean(true));
}

TEST_CASE("validation: sigma1 >= 1/2 is a strict-only violation") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(oracle::rotation_scale(0.0, 0.3), std::vector<double>{0, 0});
  maps.emplace_back(oracle::rotation_scale(0.4, 0.6), std::vector<double>{1, 0});
  const auto report = validate(AffineSystem(std::move(maps), true));
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].strict_only);
  CHECK(report.issues[0].map_index == 1);
  CHECK(report.issues[0].rule == "sigma1_lt_half");
  CHECK(!report.clean(true));
  CHECK(report.clean(false));
}

TEST_CASE("validation: singular linear part is non-bijective") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(Matrix(2, {0.3, 0.0, 0.3, 0.0}), std::vector<double>{0, 0});
  maps.emplace_back(oracle::rotation_scale(0.0, 0.3), std::vector<double>{1, 0});
  const AffineSystem sys(std::move(maps), true);
  const auto report = validate(sys);
  bool saw = false;
  for (const auto& issue : report.issues) saw |= (issue.rule == "bijective");
  CHECK(saw);
}

TEST_CASE("system construction rejects structural nonsense") {
  std::vector<AffineContraction> one;
  one.emplace_back(Matrix::identity(2), std::vector<double>{0, 0});
  CHECK_THROWS_AS(AffineSystem(std::move(one)), input_error);

  std::vector<AffineContraction> mixed;
  mixed.emplace_back(Matrix::identity(2), std::vector<double>{0, 0});
  mixed.emplace_back(Matrix::identity(3), std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(AffineSystem(std::move(mixed)), input_error);

  CHECK_THROWS_AS(
      AffineContraction(Matrix::identity(2), std::vector<double>{0.0}),
      input_error);
}

TEST_CASE("word cocycle") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(Matrix::diagonal({0.5, 1.0 / 3.0}), std::vector<double>{0, 0});
  maps.emplace_back(Matrix::diagonal({0.4, 0.2}), std::vector<double>{1, 0});
  const AffineSystem sys(std::move(maps));

  CHECK(word_cocycle(sys, Word::empty(2)).entries() ==
        Matrix::identity(2).entries());
  CHECK(word_cocycle(sys, Word({0}, 2)).entries() ==
        Matrix::diagonal({0.5, 1.0 / 3.0}).entries());
  const Matrix twice = word_cocycle(sys, Word({0, 0}, 2));
  CHECK(twice(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(twice(1, 1) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("cocycle is multiplicative over concatenation") {
  SplitMix64 rng(17);
  const AffineSystem sys = oracle::similarity_system(3, 0.4, rng);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint8_t> lu(rng.next_below(6) + 1);
    std::vector<std::uint8_t> lv(rng.next_below(6) + 1);
    for (auto& l : lu) l = static_cast<std::uint8_t>(rng.next_below(3));
    for (auto& l : lv) l = static_cast<std::uint8_t>(rng.next_below(3));
    const Word u(lu, 3), v(lv, 3);
    const Matrix split = word_cocycle(sys, u) * word_cocycle(sys, v);
    const Matrix joined = word_cocycle(sys, u.concat(v));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        CHECK(joined(r, c) == doctest::Approx(split(r, c)).epsilon(1e-12));
  }
}

TEST_CASE("estimate_D: similarities are exactly multiplicative") {
  const auto report = estimate_D(two_similarities(1.0 / 3.0), 0.8, 4, 1 << 20);
  CHECK(report.exhaustive);
  CHECK(report.d_estimate == doctest::Approx(1.0).epsilon(1e-12));
  // independent enumeration agrees
  CHECK(oracle::min_quasimult_ratio(two_similarities(1.0 / 3.0), 0.8, 3) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimate_D: identical aligned diagonal maps give D = 1") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(Matrix::diagonal({0.5, 0.25}), std::vector<double>{0, 0});
  maps.emplace_back(Matrix::diagonal({0.5, 0.25}), std::vector<double>{1, 0});
  const AffineSystem sys(std::move(maps));
  for (double t : {1.2, 1.5, 1.9}) {
    const auto report = estimate_D(sys, t, 4, 1 << 20);
    CHECK(report.d_estimate == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("estimate_D: rotation-rich pairs sit strictly inside (0, 1]") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(oracle::rotation_scale(0.9, 0.45), std::vector<double>{0, 0});
  maps.emplace_back(Matrix::diagonal({0.45, 0.1}), std::vector<double>{1, 0});
  const AffineSystem sys(std::move(maps));
  const auto report = estimate_D(sys, 1.3, 4, 1 << 20);
  CHECK(report.exhaustive);
  CHECK(report.d_estimate > 0.0);
  CHECK(report.d_estimate < 1.0);
  const double oracle_min = oracle::min_quasimult_ratio(sys, 1.3, 4);
  CHECK(report.d_estimate == doctest::Approx(oracle_min).epsilon(1e-9));
}

TEST_CASE("estimate_D sampled mode stays deterministic and conservative") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(oracle::rotation_scale(0.9, 0.45), std::vector<double>{0, 0});
  maps.emplace_back(Matrix::diagonal({0.45, 0.1}), std::vector<double>{1, 0});
  const AffineSystem sys(std::move(maps));
  // budget far below the pair count at depth 6 forces sampling
  const auto sampled_a = estimate_D(sys, 1.3, 6, 2000);
  const auto sampled_b = estimate_D(sys, 1.3, 6, 2000);
  CHECK(!sampled_a.exhaustive);
  CHECK(sampled_a.d_estimate == sampled_b.d_estimate);  // fixed internal seed
  // a sampled minimum can only overestimate the exhaustive one at >= depth
  const double exhaustive4 = oracle::min_quasimult_ratio(sys, 1.3, 4);
  CHECK(sampled_a.d_estimate > 0.0);
  CHECK(sampled_a.d_estimate <= 1.0 + 1e-12);
  CHECK(exhaustive4 <= 1.0);
}

TEST_CASE("estimate_D never increases with depth when exhaustive") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(oracle::rotation_scale(0.7, 0.4), std::vector<double>{0, 0});
  maps.emplace_back(Matrix::diagonal({0.35, 0.15}), std::vector<double>{1, 0});
  const AffineSystem sys(std::move(maps));
  double prev = 2.0;
  for (int depth = 1; depth <= 4; ++depth) {
    const auto report = estimate_D(sys, 1.1, depth, 1 << 22);
    REQUIRE(report.exhaustive);
    CHECK(report.d_estimate <= prev + 1e-12);
    prev = report.d_estimate;
  }
}

TEST_CASE("cone: positive matrices keep a cone in the first quadrant") {
  const std::vector<Matrix> parts = {Matrix(2, {0.4, 0.1, 0.1, 0.3}),
                                     Matrix(2, {0.3, 0.2, 0.05, 0.35})};
  const auto cone = cone_check_2d(parts, 4096);
  REQUIRE(cone.has_value());
  const double pi = 3.14159265358979323846;
  // interval inside [0, pi/2]
  CHECK(cone->start >= -1e-9);
  CHECK(cone->start + cone->width <= pi / 2 + 1e-9);
  // oracle: endpoint images stay inside
  for (const Matrix& t : parts) {
    const oracle::Mat2 m = {t(0, 0), t(0, 1), t(1, 0), t(1, 1)};
    for (double a : {cone->start, cone->start + cone->width}) {
      const double image = oracle::projective_angle(m, a);
      const double relative = std::fmod(image - cone->start + pi, pi);
      CHECK(relative > 0.0);
      CHECK(relative < cone->width);
    }
  }
}

TEST_CASE("cone: quarter rotation admits no invariant cone") {
  const double r = 0.4;
  const std::vector<Matrix> parts = {oracle::rotation_scale(1.5707963267948966, r)};
  CHECK(!cone_check_2d(parts, 512).has_value());
  CHECK(!cone_check_2d(parts, 4096).has_value());
}

TEST_CASE("cone: a single diagonal contraction fixes the horizontal axis") {
  const std::vector<Matrix> parts = {Matrix::diagonal({0.5, 0.25})};
  const auto cone = cone_check_2d(parts, 4096);
  REQUIRE(cone.has_value());
  // contains direction 0 (mod pi)
  const double pi = 3.14159265358979323846;
  const double rel = std::fmod(pi - cone->start, pi);
  CHECK(rel <= cone->width + 1e-12);
}

TEST_CASE("cone certificates survive re-verification at 4x resolution") {
  const std::vector<Matrix> parts = {Matrix(2, {0.4, 0.1, 0.1, 0.3}),
                                     Matrix(2, {0.3, 0.2, 0.05, 0.35})};
  const auto cone = cone_check_2d(parts, 1024);
  REQUIRE(cone.has_value());
  CHECK(cone_verify(parts, *cone, 4096));
}

TEST_CASE("cone requires d = 2") {
  std::vector<AffineContraction> maps;
  maps.emplace_back(Matrix(1, {0.4}), std::vector<double>{0.0});
  maps.emplace_back(Matrix(1, {0.4}), std::vector<double>{0.5});
  const AffineSystem sys(std::move(maps));
  CHECK_THROWS_AS(cone_check_2d(sys, 512), input_error);
}

TEST_CASE("project_word basics") {
  const AffineSystem sys = thirds_1d();
  const auto origin = project_word(sys, Word::empty(2));
  CHECK(origin.point[0] == 0.0);
  CHECK(origin.error_radius == doctest::Approx(1.0));  // M = (2/3)/(1-1/3)

  // all-ones word of length 10: geometric series 1 - 3^{-10}
  const auto ones = project_word(sys, Word(std::vector<std::uint8_t>(10, 1), 2));
  CHECK(ones.point[0] ==
        doctest::Approx(1.0 - std::pow(3.0, -10.0)).epsilon(1e-12));

  const auto zeros = project_word(sys, Word(std::vector<std::uint8_t>(8, 0), 2));
  CHECK(zeros.point[0] == 0.0);
}

TEST_CASE("extensions of a common prefix stay within the error radius") {
  SplitMix64 rng(23);
  const AffineSystem sys = oracle::similarity_system(2, 0.45, rng);
  for (int trial = 0; trial < 200; ++trial) {
    const int plen = 1 + static_cast<int>(rng.next_below(8));
    std::vector<std::uint8_t> base(static_cast<size_t>(plen));
    for (auto& l : base) l = static_cast<std::uint8_t>(rng.next_below(2));
    const Word prefix(base, 2);
    auto extend = [&](int extra) {
      std::vector<std::uint8_t> letters = base;
      for (int i = 0; i < extra; ++i)
        letters.push_back(static_cast<std::uint8_t>(rng.next_below(2)));
      return Word(letters, 2);
    };
    const auto pu = project_word(sys, extend(1 + static_cast<int>(rng.next_below(6))));
    const auto pv = project_word(sys, extend(1 + static_cast<int>(rng.next_below(6))));
    const auto bound = project_word(sys, prefix);
    double dist = 0.0;
    for (size_t i = 0; i < pu.point.size(); ++i)
      dist += (pu.point[i] - pv.point[i]) * (pu.point[i] - pv.point[i]);
    CHECK(std::sqrt(dist) <= 2.0 * bound.error_radius + 1e-12);
  }
}
