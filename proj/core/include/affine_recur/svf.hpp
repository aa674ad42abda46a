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
// Small-dimension linear algebra for affine thermodynamic formalism:
// singular values of d x d real matrices and the singular value function
//
//   phi^t(T) = sigma_1(T) ... sigma_floor(t)(T) * sigma_{floor(t)+1}(T)^{t - floor(t)}
//
// evaluated in log-space so that products over long words do not underflow.

#ifndef AFFINE_RECUR_SVF_HPP_
#define AFFINE_RECUR_SVF_HPP_

#include <cstdint>
#include <vector>

namespace affine_recur {

/// Dense d x d real matrix, row-major. Entries must be finite; dim >= 1.
/// Small d (2 or 3 in practice) — everything is O(d^3) without blocking.
class Matrix {
 public:
  explicit Matrix(int dim);  // zero matrix
  Matrix(int dim, std::vector<double> row_major_entries);

  static Matrix identity(int dim);
  static Matrix diagonal(const std::vector<double>& diag);

  int dim() const { return dim_; }
  double operator()(int r, int c) const { return a_[r * dim_ + c]; }
  double& operator()(int r, int c) { return a_[r * dim_ + c]; }
  const std::vector<double>& entries() const { return a_; }

  Matrix transpose() const;
  double det() const;             // partial-pivot LU
  double max_abs_entry() const;

  /// y = M x
  std::vector<double> apply(const std::vector<double>& x) const;

 private:
  int dim_;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Ordinary product AB; throws input_error on dimension mismatch.
Matrix matrix_product(const Matrix& a, const Matrix& b);

/// Singular values in non-increasing order:
/// sigma_1 >= sigma_2 >= ... >= sigma_d >= 0.
struct SingularSpectrum {
  std::vector<double> values;

  double sigma(int i) const { return values[i - 1]; }  // 1-based, as in print
  double largest() const { return values.front(); }
  double smallest() const { return values.back(); }
};

/// Singular values of M (semiaxis lengths of the image ellipsoid of the
/// unit ball). d = 1 is |m|; d = 2 uses the closed form from trace and
/// determinant of M^T M with a guarded small-value branch; d >= 3 runs a
/// cyclic Jacobi eigensolver on M^T M (off-diagonal Frobenius reduced
/// below 1e-14 of the matrix norm, at most 64 sweeps).
/// Accepts singular matrices; throws input_error on non-finite entries.
SingularSpectrum singular_values(const Matrix& m);

/// Exponent t of phi^t with its domain check 0 <= t <= d.
class SvfExponent {
 public:
  SvfExponent(double t, int dim);

  double value() const { return t_; }
  int dim() const { return dim_; }
  int whole() const { return whole_; }     // floor(t); exactly t when integer
  double frac() const { return frac_; }    // {t}; 0 when t is an integer

 private:
  double t_;
  int dim_;
  int whole_;
  double frac_;
};

/// log phi^t(M). phi^0 == 1 (empty product). Returns -infinity when a
/// needed singular value is zero (rank-deficient M with t above the
/// rank); that is a signal value, not an error.
double log_phi(const SvfExponent& t, const Matrix& m);
double log_phi(double t, const Matrix& m);

/// Same, starting from an already computed spectrum.
double log_phi(const SvfExponent& t, const SingularSpectrum& s);

/// A matrix together with a factored-out log scale: represents
/// exp(log_scale) * mat. Keeps long word products representable;
/// phi^t scales as exp(t * log_scale).
struct ScaledMatrix {
  Matrix mat;
  double log_scale = 0.0;

  explicit ScaledMatrix(int dim) : mat(Matrix::identity(dim)) {}
  ScaledMatrix(Matrix m, double ls) : mat(std::move(m)), log_scale(ls) {}

  /// Multiply a factor on the right and renormalize.
  void push_right(const Matrix& factor);
};

/// Running product T_{w_1} T_{w_2} ... T_{w_n} of contractions, extended
/// one factor at a time, exposing log(sigma_1 ... sigma_j) of the product
/// for every j. Tracks every exterior power with its own log rescaling,
/// so the values stay accurate for products of thousands of factors even
/// when the singular values spread over hundreds of orders of magnitude
/// (the top singular value of the j-th exterior power is exactly
/// sigma_1 ... sigma_j of the base product).
class CocycleAccumulator {
 public:
  explicit CocycleAccumulator(int dim);

  void push_right(const Matrix& factor);
  std::int64_t length() const { return len_; }
  int dim() const { return dim_; }

  /// log(sigma_1 ... sigma_j) of the accumulated product; j in [0, d].
  double log_singular_prefix(int j) const;
  /// log sigma_i of the accumulated product, i in [1, d].
  double log_sigma(int i) const;
  /// log phi^t of the accumulated product.
  double log_phi(double t) const;

 private:
  struct Layer {
    int n;
    std::vector<double> a;  // n x n row-major, current exterior power product
    double log_scale;
  };

  int dim_;
  std::int64_t len_ = 0;
  std::vector<Layer> layers_;                      // layers_[j-1] = wedge^j
  std::vector<std::vector<std::vector<int>>> subsets_;  // j-subsets of {0..d-1}
};

}  // namespace affine_recur

#endif  // AFFINE_RECUR_SVF_HPP_
