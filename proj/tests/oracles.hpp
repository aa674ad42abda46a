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
// Test-only brute-force oracles. These deliberately avoid the library's
// word-tree, log-space, and guarded-SVD code paths: plain linear-space
// arithmetic over explicit enumerations, so that agreement is evidence
// and not circularity.

#ifndef AFFINE_RECUR_TESTS_ORACLES_HPP_
#define AFFINE_RECUR_TESTS_ORACLES_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "affine_recur/ifs.hpp"
#include "affine_recur/prng.hpp"
#include "affine_recur/svf.hpp"
#include "affine_recur/symbolic.hpp"

namespace oracle {

using Mat2 = std::array<double, 4>;

inline Mat2 mul2(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Singular values of a 2x2 from the characteristic polynomial of M^T M,
// textbook form (no guarded subtraction).
inline std::array<double, 2> sv2(const Mat2& m) {
  const double b00 = m[0] * m[0] + m[2] * m[2];
  const double b11 = m[1] * m[1] + m[3] * m[3];
  const double b01 = m[0] * m[1] + m[2] * m[3];
  const double tr = b00 + b11;
  const double det = b00 * b11 - b01 * b01;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double l1 = 0.5 * (tr + disc);
  const double l2 = 0.5 * (tr - disc);
  return {std::sqrt(std::max(0.0, l1)), std::sqrt(std::max(0.0, l2))};
}

// phi^t in plain linear space.
inline double phi_t(const Mat2& m, double t) {
  const auto sv = sv2(m);
  const int whole = static_cast<int>(std::floor(t));
  const double frac = t - whole;
  double value = 1.0;
  for (int i = 0; i < whole; ++i) value *= sv[static_cast<size_t>(i)];
  if (frac > 0.0) value *= std::pow(sv[static_cast<size_t>(whole)], frac);
  return value;
}

inline Mat2 linear_of(const affine_recur::AffineSystem& sys, int i) {
  const affine_recur::Matrix& t = sys.map(i).linear;
  return {t(0, 0), t(0, 1), t(1, 0), t(1, 1)};
}

// sum over all words of length k of phi^t(T_w * suffix), by explicit
// enumeration in linear space. d = 2 only; k small.
inline double sum_phi_naive(const affine_recur::AffineSystem& sys, double t,
                            int k, const Mat2& suffix) {
  const int m = sys.map_count();
  double total = 0.0;
  std::vector<int> word(static_cast<size_t>(k), 0);
  for (;;) {
    Mat2 prod = {1, 0, 0, 1};
    for (int p = 0; p < k; ++p)
      prod = mul2(prod, linear_of(sys, word[static_cast<size_t>(p)]));
    prod = mul2(prod, suffix);
    total += phi_t(prod, t);
    int pos = k - 1;
    while (pos >= 0 && ++word[static_cast<size_t>(pos)] == m) {
      word[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return total;
}

inline double sum_phi_naive(const affine_recur::AffineSystem& sys, double t,
                            int k) {
  return sum_phi_naive(sys, t, k, Mat2{1, 0, 0, 1});
}

// Minimal phi^t(T_{uv}) / (phi^t(T_u) phi^t(T_v)) over all word pairs
// with lengths 1..depth, by direct double enumeration.
inline double min_quasimult_ratio(const affine_recur::AffineSystem& sys,
                                  double t, int depth) {
  const int m = sys.map_count();
  std::vector<Mat2> products;
  std::vector<Mat2> frontier = {{1, 0, 0, 1}};
  for (int len = 1; len <= depth; ++len) {
    std::vector<Mat2> next;
    for (const Mat2& p : frontier)
      for (int letter = 0; letter < m; ++letter) {
        next.push_back(mul2(p, linear_of(sys, letter)));
        products.push_back(next.back());
      }
    frontier = std::move(next);
  }
  double best = 1e300;
  for (const Mat2& u : products)
    for (const Mat2& v : products) {
      const double ratio = phi_t(mul2(u, v), t) / (phi_t(u, t) * phi_t(v, t));
      best = std::min(best, ratio);
    }
  return best;
}

// Direction angle (mod pi) of T * (cos a, sin a): the projective action
// used to cross-check cone certificates.
inline double projective_angle(const Mat2& t, double a) {
  const double x = t[0] * std::cos(a) + t[1] * std::sin(a);
  const double y = t[2] * std::cos(a) + t[3] * std::sin(a);
  double angle = std::atan2(y, x);
  const double pi = 3.14159265358979323846;
  while (angle < 0.0) angle += pi;
  while (angle >= pi) angle -= pi;
  return angle;
}

// --- random generators (fixed seeds in the tests) ---

inline affine_recur::Matrix random_contraction_2d(affine_recur::SplitMix64& rng,
                                                  double max_norm = 0.9) {
  std::vector<double> entries(4);
  for (double& e : entries) e = 2.0 * rng.next_double() - 1.0;
  affine_recur::Matrix m(2, entries);
  const double s1 = affine_recur::singular_values(m).largest();
  const double target = (0.1 + (max_norm - 0.1) * rng.next_double());
  const double scale = s1 > 0.0 ? target / s1 : 0.0;
  for (double& e : entries) e *= scale;
  return affine_recur::Matrix(2, entries);
}

inline affine_recur::Matrix rotation_scale(double angle, double ratio,
                                           bool reflect = false) {
  const double c = std::cos(angle), s = std::sin(angle);
  if (reflect)
    return affine_recur::Matrix(2, {ratio * c, ratio * s, ratio * s, -ratio * c});
  return affine_recur::Matrix(2, {ratio * c, -ratio * s, ratio * s, ratio * c});
}

// m similarities with a common ratio, rotations and translations drawn
// from the rng.
inline affine_recur::AffineSystem similarity_system(int m, double ratio,
                                                    affine_recur::SplitMix64& rng,
                                                    bool strict = true) {
  std::vector<affine_recur::AffineContraction> maps;
  for (int i = 0; i < m; ++i) {
    const double angle = 6.283185307179586 * rng.next_double();
    maps.emplace_back(rotation_scale(angle, ratio),
                      std::vector<double>{rng.next_double(), rng.next_double()});
  }
  return affine_recur::AffineSystem(std::move(maps), strict);
}

}  // namespace oracle

#endif  // AFFINE_RECUR_TESTS_ORACLES_HPP_
