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
#include "affine_recur/svf.hpp"
#include "doctest.h"
#include "oracles.hpp"

using affine_recur::CocycleAccumulator;
using affine_recur::input_error;
using affine_recur::log_phi;
using affine_recur::Matrix;
using affine_recur::matrix_product;
using affine_recur::singular_values;
using affine_recur::SplitMix64;
using affine_recur::SvfExponent;

namespace {
const double kGolden = 0.5 * (1.0 + std::sqrt(5.0));  // 1.618033988749895
}

TEST_CASE("singular values of isometries are all one") {
  CHECK(singular_values(Matrix::identity(2)).values ==
        std::vector<double>{1.0, 1.0});
  for (double angle : {0.3, 1.2, 2.9, -0.7}) {
    const Matrix rot = oracle::rotation_scale(angle, 1.0);
    const auto sv = singular_values(rot);
    CHECK(sv.largest() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sv.smallest() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("singular values of diagonal matrices") {
  const auto sv = singular_values(Matrix::diagonal({0.5, 1.0 / 3.0}));
  CHECK(sv.sigma(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sv.sigma(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("shear matrix has golden-ratio singular values") {
  // M^T M = [[1,1],[1,2]], eigenvalues (3 +- sqrt 5)/2.
  const auto sv = singular_values(Matrix(2, {1, 1, 0, 1}));
  CHECK(sv.sigma(1) == doctest::Approx(kGolden).epsilon(1e-12));
  CHECK(sv.sigma(2) == doctest::Approx(kGolden - 1.0).epsilon(1e-12));
}

TEST_CASE("singular matrices are accepted by the numeric core") {
  const auto sv = singular_values(Matrix(2, {1, 0, 0, 0}));
  CHECK(sv.sigma(1) == doctest::Approx(1.0));
  CHECK(sv.sigma(2) == doctest::Approx(0.0));
}

TEST_CASE("non-finite entries are rejected") {
  CHECK_THROWS_AS(Matrix(2, {1.0, 0.0, 0.0, std::nan("")}), input_error);
}

TEST_CASE("d=3 singular values against a known diagonal-rotation case") {
  // Block rotation in the xy-plane times a z-scale: spectrum {r, r, h}.
  const double c = std::cos(0.4), s = std::sin(0.4);
  const Matrix m(3, {0.4 * c, -0.4 * s, 0, 0.4 * s, 0.4 * c, 0, 0, 0, 0.2});
  const auto sv = singular_values(m);
  CHECK(sv.sigma(1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(sv.sigma(2) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(sv.sigma(3) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("log_phi basics") {
  const Matrix d23 = Matrix::diagonal({0.5, 1.0 / 3.0});
  CHECK(log_phi(0.0, d23) == 0.0);
  CHECK(log_phi(2.0, d23) == doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-14));
  // t = 1.5 on diag(1/2, 1/3): log(0.5 * (1/3)^0.5) ~ log(0.288675)
  CHECK(log_phi(1.5, d23) ==
        doctest::Approx(std::log(0.5 * std::sqrt(1.0 / 3.0))).epsilon(1e-14));
}

TEST_CASE("log_phi returns -inf for rank-deficient matrices past the rank") {
  const Matrix rank1(2, {1, 0, 0, 0});
  CHECK(log_phi(2.0, rank1) == -std::numeric_limits<double>::infinity());
  CHECK(log_phi(1.5, rank1) == -std::numeric_limits<double>::infinity());
  CHECK(log_phi(1.0, rank1) == doctest::Approx(0.0));
}

TEST_CASE("SvfExponent domain checks") {
  CHECK_THROWS_AS(SvfExponent(-0.1, 2), input_error);
  CHECK_THROWS_AS(SvfExponent(2.1, 2), input_error);
  CHECK(SvfExponent(2.0, 2).frac() == 0.0);
  CHECK(SvfExponent(2.0, 2).whole() == 2);
}

TEST_CASE("matrix product basics") {
  const Matrix a(2, {0.3, 0.1, -0.2, 0.4});
  const Matrix prod = matrix_product(a, Matrix::identity(2));
  CHECK(prod.entries() == a.entries());
  const Matrix d1 = Matrix::diagonal({2, 3});
  const Matrix d2 = Matrix::diagonal({5, 7});
  CHECK(matrix_product(d1, d2).entries() == std::vector<double>{10, 0, 0, 21});
  const Matrix swap(2, {0, 1, 1, 0});
  CHECK(matrix_product(swap, swap).entries() == Matrix::identity(2).entries());
  CHECK_THROWS_AS(matrix_product(Matrix::identity(2), Matrix::identity(3)),
                  input_error);
}

TEST_CASE("sigma_d^t <= phi^t <= sigma_1^t over random contractions") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 10000; ++trial) {
    const Matrix m = oracle::random_contraction_2d(rng);
    const double t = 2.0 * rng.next_double();
    const auto sv = singular_values(m);
    const double lp = log_phi(t, m);
    CHECK(lp <= t * std::log(sv.largest()) + 1e-9);
    CHECK(lp >= t * std::log(sv.smallest()) - 1e-9);
  }
}

TEST_CASE("submultiplicativity of log_phi over random pairs") {
  SplitMix64 rng(202);
  for (int trial = 0; trial < 10000; ++trial) {
    const Matrix a = oracle::random_contraction_2d(rng);
    const Matrix b = oracle::random_contraction_2d(rng);
    const double t = 2.0 * rng.next_double();
    CHECK(log_phi(t, a * b) <= log_phi(t, a) + log_phi(t, b) + 1e-9);
  }
}

TEST_CASE("phi^{t+delta}/phi^t sum ratio is pinched by extreme singular values") {
  SplitMix64 rng(303);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(3));
    std::vector<Matrix> family;
    double min_sd = 1e300, max_s1 = 0.0;
    for (int i = 0; i < n; ++i) {
      family.push_back(oracle::random_contraction_2d(rng));
      const auto sv = singular_values(family.back());
      min_sd = std::min(min_sd, sv.smallest());
      max_s1 = std::max(max_s1, sv.largest());
    }
    const double delta = 0.001 + 0.049 * rng.next_double();
    const double t = (2.0 - delta) * rng.next_double();
    double sum_t = 0.0, sum_td = 0.0;
    for (const Matrix& m : family) {
      sum_t += std::exp(log_phi(t, m));
      sum_td += std::exp(log_phi(t + delta, m));
    }
    const double ratio = sum_td / sum_t;
    CHECK(ratio <= std::pow(max_s1, delta) * (1 + 1e-9));
    CHECK(ratio >= std::pow(min_sd, delta) * (1 - 1e-9));
  }
}

TEST_CASE("log_phi strictly decreases in t for strict contractions") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix m = oracle::random_contraction_2d(rng, 0.8);
    double t1 = 2.0 * rng.next_double();
    double t2 = 2.0 * rng.next_double();
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 < 1e-6) continue;
    CHECK(log_phi(t1, m) > log_phi(t2, m));
  }
}

TEST_CASE("closed forms for diagonal and similarity matrices to 1e-12") {
  SplitMix64 rng(505);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 0.1 + 0.8 * rng.next_double();
    const double b = a * rng.next_double();
    const Matrix diag = Matrix::diagonal({a, b});
    for (double t : {0.25, 1.0, 1.5, 2.0}) {
      const double expected =
          (t <= 1.0) ? t * std::log(a) : std::log(a) + (t - 1.0) * std::log(b);
      CHECK(log_phi(t, diag) == doctest::Approx(expected).epsilon(1e-12));
    }
    const double r = 0.1 + 0.8 * rng.next_double();
    const Matrix sim = oracle::rotation_scale(6.28 * rng.next_double(), r);
    for (double t : {0.5, 1.0, 1.7}) {
      CHECK(log_phi(t, sim) == doctest::Approx(t * std::log(r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cocycle accumulator matches direct evaluation on short products") {
  // Short products only: past a dozen random factors the direct path's
  // sigma_2 (via the multiplied-out determinant) loses digits to
  // cancellation while the accumulator's exterior layer does not.
  SplitMix64 rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Matrix> factors;
    Matrix direct = Matrix::identity(2);
    CocycleAccumulator acc(2);
    const int len = 1 + static_cast<int>(rng.next_below(10));
    for (int i = 0; i < len; ++i) {
      factors.push_back(oracle::random_contraction_2d(rng));
      direct = direct * factors.back();
      acc.push_right(factors.back());
    }
    for (double t : {0.0, 0.6, 1.0, 1.4, 2.0}) {
      const double want = log_phi(t, direct);
      CHECK(acc.log_phi(t) == doctest::Approx(want).epsilon(1e-6));
    }
  }
}

TEST_CASE("cocycle accumulator survives products far past underflow") {
  // 4000 copies of diag(1/2, 1/4): log sigma_1 = -4000 log 2, log sigma_2
  // = -8000 log 2, both far below what a plain double product can hold.
  CocycleAccumulator acc(2);
  const Matrix m = Matrix::diagonal({0.5, 0.25});
  for (int i = 0; i < 4000; ++i) acc.push_right(m);
  CHECK(acc.log_sigma(1) == doctest::Approx(-4000 * std::log(2.0)).epsilon(1e-12));
  CHECK(acc.log_sigma(2) == doctest::Approx(-8000 * std::log(2.0)).epsilon(1e-12));
  CHECK(acc.log_phi(1.5) ==
        doctest::Approx(-4000 * std::log(2.0) - 4000 * std::log(2.0))
            .epsilon(1e-12));
}

TEST_CASE("cocycle accumulator in d=3") {
  CocycleAccumulator acc(3);
  const Matrix m = Matrix::diagonal({0.5, 0.4, 0.1});
  for (int i = 0; i < 100; ++i) acc.push_right(m);
  CHECK(acc.log_singular_prefix(2) ==
        doctest::Approx(100 * std::log(0.5 * 0.4)).epsilon(1e-12));
  CHECK(acc.log_sigma(3) == doctest::Approx(100 * std::log(0.1)).epsilon(1e-12));
}
