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

#include "affine_recur/svf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affine_recur/errors.hpp"

namespace affine_recur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw input_error(std::string(what) + ": non-finite entry");
    }
  }
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
// descending order. b is row-major n x n and is destroyed.
std::vector<double> symmetric_eigenvalues(std::vector<double> b, int n) {
  auto off_norm2 = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += b[i * n + j] * b[i * n + j];
    return s;
  };
  double scale = 0.0;
  for (double x : b) scale = std::max(scale, std::abs(x));
  const double tol = (scale > 0 ? scale : 1.0) * 1e-14;

  for (int sweep = 0; sweep < 64 && off_norm2() > tol * tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = b[p * n + q];
        if (std::abs(apq) <= tol * 1e-3) continue;
        const double app = b[p * n + p];
        const double aqq = b[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double bkp = b[k * n + p];
          const double bkq = b[k * n + q];
          b[k * n + p] = c * bkp - s * bkq;
          b[k * n + q] = s * bkp + c * bkq;
        }
        for (int k = 0; k < n; ++k) {
          const double bpk = b[p * n + k];
          const double bqk = b[q * n + k];
          b[p * n + k] = c * bpk - s * bqk;
          b[q * n + k] = s * bpk + c * bqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = b[i * n + i];
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

// det of a small n x n matrix, partial-pivot LU; a is destroyed.
double lu_det(std::vector<double> a, int n) {
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      det = -det;
    }
    det *= a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

}  // namespace

Matrix::Matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, 0.0) {
  if (dim < 1) throw input_error("Matrix: dim must be >= 1");
}

Matrix::Matrix(int dim, std::vector<double> row_major_entries)
    : dim_(dim), a_(std::move(row_major_entries)) {
  if (dim < 1) throw input_error("Matrix: dim must be >= 1");
  if (a_.size() != static_cast<size_t>(dim) * dim) {
    throw input_error("Matrix: entry count does not match dim*dim");
  }
  require_finite(a_, "Matrix");
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& diag) {
  Matrix m(static_cast<int>(diag.size()));
  require_finite(diag, "Matrix::diagonal");
  for (int i = 0; i < m.dim(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::det() const {
  if (dim_ == 1) return a_[0];
  if (dim_ == 2) return a_[0] * a_[3] - a_[1] * a_[2];
  return lu_det(a_, dim_);
}

double Matrix::max_abs_entry() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> Matrix::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw input_error("Matrix::apply: vector size mismatch");
  std::vector<double> y(dim_, 0.0);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) y[r] += (*this)(r, c) * x[c];
  return y;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  return matrix_product(a, b);
}

Matrix matrix_product(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim())
    throw input_error("matrix_product: dimension mismatch");
  const int d = a.dim();
  Matrix c(d);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k) {
      const double arj = a(r, k);
      if (arj == 0.0) continue;
      for (int j = 0; j < d; ++j) c(r, j) += arj * b(k, j);
    }
  return c;
}

SingularSpectrum singular_values(const Matrix& m) {
  const int d = m.dim();
  require_finite(m.entries(), "singular_values");
  SingularSpectrum s;
  s.values.resize(d);

  if (d == 1) {
    s.values[0] = std::abs(m(0, 0));
    return s;
  }

  if (d == 2) {
    // B = M^T M: tr = |M|_F^2, disc = (b00-b11)^2 + 4 b01^2 (no cancellation).
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), e = m(1, 1);
    const double b00 = a * a + c * c;
    const double b11 = b * b + e * e;
    const double b01 = a * b + c * e;
    const double tr = b00 + b11;
    const double disc = std::sqrt((b00 - b11) * (b00 - b11) + 4.0 * b01 * b01);
    const double lam1 = 0.5 * (tr + disc);
    const double s1 = std::sqrt(std::max(0.0, lam1));
    const double det = std::abs(a * e - b * c);
    // Small singular value from |det| / sigma_1 when that is stable,
    // otherwise from the (possibly cancelling) eigenvalue formula.
    double s2;
    if (s1 > 0.0) {
      s2 = det / s1;
    } else {
      s2 = 0.0;
    }
    if (!std::isfinite(s2)) s2 = std::sqrt(std::max(0.0, 0.5 * (tr - disc)));
    s.values[0] = s1;
    s.values[1] = std::min(s2, s1);
    return s;
  }

  // d >= 3: Jacobi on M^T M.
  const Matrix b = m.transpose() * m;
  std::vector<double> eig = symmetric_eigenvalues(b.entries(), d);
  for (int i = 0; i < d; ++i) s.values[i] = std::sqrt(std::max(0.0, eig[i]));
  std::sort(s.values.begin(), s.values.end(), std::greater<double>());
  return s;
}

SvfExponent::SvfExponent(double t, int dim) : t_(t), dim_(dim) {
  if (!(dim >= 1)) throw input_error("SvfExponent: dim must be >= 1");
  if (!std::isfinite(t) || t < 0.0 || t > static_cast<double>(dim)) {
    throw input_error("SvfExponent: t must lie in [0, d]");
  }
  whole_ = static_cast<int>(std::floor(t_));
  frac_ = t_ - static_cast<double>(whole_);
  if (frac_ == 0.0) {
    // integer t: exactly floor(t) factors, no epsilon branch
  } else if (whole_ == dim_) {
    // cannot happen: t <= d and frac > 0 implies whole < d
    whole_ = dim_ - 1;
    frac_ = 1.0;
  }
}

double log_phi(const SvfExponent& t, const SingularSpectrum& s) {
  double acc = 0.0;
  for (int i = 0; i < t.whole(); ++i) {
    const double v = s.values[i];
    if (v <= 0.0) return -kInf;
    acc += std::log(v);
  }
  if (t.frac() > 0.0) {
    const double v = s.values[t.whole()];
    if (v <= 0.0) return -kInf;
    acc += t.frac() * std::log(v);
  }
  return acc;
}

double log_phi(const SvfExponent& t, const Matrix& m) {
  if (m.dim() != t.dim())
    throw input_error("log_phi: exponent dim does not match matrix dim");
  if (t.value() == 0.0) return 0.0;
  return log_phi(t, singular_values(m));
}

double log_phi(double t, const Matrix& m) {
  return log_phi(SvfExponent(t, m.dim()), m);
}

void ScaledMatrix::push_right(const Matrix& factor) {
  mat = mat * factor;
  const double norm = mat.max_abs_entry();
  if (norm > 0.0 && (norm < 1e-120 || norm > 1e120)) {
    const double inv = 1.0 / norm;
    Matrix scaled(mat.dim());
    for (int r = 0; r < mat.dim(); ++r)
      for (int c = 0; c < mat.dim(); ++c) scaled(r, c) = mat(r, c) * inv;
    mat = scaled;
    log_scale += std::log(norm);
  }
}

namespace {

std::vector<std::vector<int>> subsets_of_size(int d, int j) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // lexicographic enumeration
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == j) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < d; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

CocycleAccumulator::CocycleAccumulator(int dim) : dim_(dim) {
  if (dim < 1) throw input_error("CocycleAccumulator: dim must be >= 1");
  subsets_.resize(dim);
  layers_.resize(dim);
  for (int j = 1; j <= dim; ++j) {
    subsets_[j - 1] = subsets_of_size(dim, j);
    const int n = static_cast<int>(subsets_[j - 1].size());
    Layer& layer = layers_[j - 1];
    layer.n = n;
    layer.a.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) layer.a[i * n + i] = 1.0;  // wedge^j identity
    layer.log_scale = 0.0;
  }
}

void CocycleAccumulator::push_right(const Matrix& factor) {
  if (factor.dim() != dim_)
    throw input_error("CocycleAccumulator: factor dim mismatch");
  for (int j = 1; j <= dim_; ++j) {
    Layer& layer = layers_[j - 1];
    const auto& subs = subsets_[j - 1];
    const int n = layer.n;
    // exterior power of the factor: entries are j x j minors
    std::vector<double> ext(static_cast<size_t>(n) * n);
    std::vector<double> minor(static_cast<size_t>(j) * j);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        for (int rr = 0; rr < j; ++rr)
          for (int cc = 0; cc < j; ++cc)
            minor[rr * j + cc] = factor(subs[r][rr], subs[c][cc]);
        ext[r * n + c] = (j == 1) ? minor[0] : lu_det(minor, j);
      }
    }
    // layer.a = layer.a * ext
    std::vector<double> prod(static_cast<size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) {
        const double v = layer.a[r * n + k];
        if (v == 0.0) continue;
        for (int c = 0; c < n; ++c) prod[r * n + c] += v * ext[k * n + c];
      }
    layer.a = std::move(prod);
    double norm = 0.0;
    for (double x : layer.a) norm = std::max(norm, std::abs(x));
    if (norm > 0.0 && (norm < 1e-60 || norm > 1e60)) {
      const double inv = 1.0 / norm;
      for (double& x : layer.a) x *= inv;
      layer.log_scale += std::log(norm);
    }
  }
  ++len_;
}

double CocycleAccumulator::log_singular_prefix(int j) const {
  if (j < 0 || j > dim_)
    throw input_error("log_singular_prefix: j out of [0, d]");
  if (j == 0) return 0.0;
  const Layer& layer = layers_[j - 1];
  const Matrix m(layer.n, layer.a);
  const double top = singular_values(m).largest();
  if (top <= 0.0) return -kInf;
  return std::log(top) + layer.log_scale;
}

double CocycleAccumulator::log_sigma(int i) const {
  if (i < 1 || i > dim_) throw input_error("log_sigma: i out of [1, d]");
  return log_singular_prefix(i) - log_singular_prefix(i - 1);
}

double CocycleAccumulator::log_phi(double t) const {
  const SvfExponent e(t, dim_);
  if (e.value() == 0.0) return 0.0;
  const double whole_part = log_singular_prefix(e.whole());
  if (e.frac() == 0.0) return whole_part;
  const double next = log_singular_prefix(e.whole() + 1);
  return whole_part + e.frac() * (next - whole_part);
}

}  // namespace affine_recur
