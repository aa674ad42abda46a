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

#include "affine_recur/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affine_recur/errors.hpp"
#include "affine_recur/prng.hpp"

namespace affine_recur {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

AffineContraction::AffineContraction(Matrix lin, std::vector<double> trans)
    : linear(std::move(lin)), translation(std::move(trans)) {
  if (static_cast<int>(translation.size()) != linear.dim())
    throw input_error("AffineContraction: translation size != dim");
  for (double x : translation)
    if (!std::isfinite(x))
      throw input_error("AffineContraction: non-finite translation");
}

AffineSystem::AffineSystem(std::vector<AffineContraction> maps, bool strict)
    : maps_(std::move(maps)), strict_(strict) {
  if (maps_.size() < 2)
    throw input_error("AffineSystem: at least two maps required");
  dim_ = maps_[0].linear.dim();
  for (const auto& f : maps_)
    if (f.linear.dim() != dim_)
      throw input_error("AffineSystem: maps have mixed dimensions");
  spectra_.reserve(maps_.size());
  sigma_plus_ = 0.0;
  sigma_minus_ = std::numeric_limits<double>::infinity();
  for (const auto& f : maps_) {
    spectra_.push_back(singular_values(f.linear));
    sigma_plus_ = std::max(sigma_plus_, spectra_.back().largest());
    sigma_minus_ = std::min(sigma_minus_, spectra_.back().smallest());
  }
}

bool AffineSystem::is_conformal(double tol) const {
  for (const auto& s : spectra_) {
    if (s.largest() <= 0.0) return false;
    if ((s.largest() - s.smallest()) / s.largest() > tol) return false;
  }
  return true;
}

bool AffineSystem::is_aligned_diagonal() const {
  for (const auto& f : maps_) {
    const Matrix& t = f.linear;
    double scale = t.max_abs_entry();
    if (scale == 0.0) return false;
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c)
        if (r != c && std::abs(t(r, c)) > 1e-14 * scale) return false;
  }
  // one coordinate order must sort every map's |diagonal| descending
  std::vector<int> order(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) order[static_cast<size_t>(i)] = i;
  const Matrix& first = maps_[0].linear;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(first(a, a)) > std::abs(first(b, b));
  });
  for (const auto& f : maps_) {
    const Matrix& t = f.linear;
    for (int i = 0; i + 1 < dim_; ++i) {
      const int a = order[static_cast<size_t>(i)];
      const int b = order[static_cast<size_t>(i + 1)];
      if (std::abs(t(a, a)) < std::abs(t(b, b))) return false;
    }
  }
  return true;
}

double AffineSystem::invariant_ball_radius() const {
  double radius = 0.0;
  for (size_t i = 0; i < maps_.size(); ++i) {
    const double s1 = spectra_[i].largest();
    if (s1 >= 1.0) return std::numeric_limits<double>::infinity();
    radius = std::max(radius, norm2(maps_[i].translation) / (1.0 - s1));
  }
  return radius;
}

ValidationReport validate(const AffineSystem& sys) {
  ValidationReport report;
  for (int i = 0; i < sys.map_count(); ++i) {
    const auto& spec = sys.spectrum(i);
    const double det = sys.map(i).linear.det();
    report.per_map.push_back({spec.largest(), spec.smallest(), det});
    if (det == 0.0 || spec.smallest() == 0.0) {
      report.issues.push_back(
          {i, false, "bijective",
           "map " + std::to_string(i) + " is non-bijective (det = 0)"});
    }
    if (spec.largest() >= 1.0) {
      report.issues.push_back(
          {i, false, "contraction",
           "map " + std::to_string(i) + " is not a contraction (sigma1 = " +
               std::to_string(spec.largest()) + ")"});
    } else if (spec.largest() >= 0.5) {
      report.issues.push_back(
          {i, true, "sigma1_lt_half",
           "map " + std::to_string(i) + " has sigma1 = " +
               std::to_string(spec.largest()) + " >= 1/2"});
    }
  }
  return report;
}

Matrix word_cocycle(const AffineSystem& sys, const Word& w) {
  if (!w.is_empty() && w.alphabet() != sys.map_count())
    throw input_error("word_cocycle: word alphabet != map count");
  Matrix prod = Matrix::identity(sys.dim());
  for (std::int64_t i = 0; i < w.length(); ++i) {
    const int letter = w.letter(i);
    if (letter < 0 || letter >= sys.map_count())
      throw input_error("word_cocycle: letter out of range");
    prod = prod * sys.map(letter).linear;
  }
  return prod;
}

namespace {

// All words of length 1..depth in lexicographic order, with their
// cocycle products and log phi values.
struct WordTable {
  std::vector<Word> words;
  std::vector<Matrix> products;
  std::vector<double> log_phis;
};

WordTable enumerate_words(const AffineSystem& sys, double t, int depth) {
  WordTable table;
  const int m = sys.map_count();
  std::vector<std::pair<Word, Matrix>> frontier;
  frontier.emplace_back(Word::empty(m), Matrix::identity(sys.dim()));
  for (int len = 1; len <= depth; ++len) {
    std::vector<std::pair<Word, Matrix>> next;
    next.reserve(frontier.size() * static_cast<size_t>(m));
    for (const auto& [w, prod] : frontier) {
      for (int letter = 0; letter < m; ++letter) {
        Word extended = w.appended(letter);
        Matrix p = prod * sys.map(letter).linear;
        table.words.push_back(extended);
        table.log_phis.push_back(log_phi(t, p));
        table.products.push_back(p);
        next.emplace_back(std::move(extended), std::move(p));
      }
    }
    frontier = std::move(next);
  }
  return table;
}

std::int64_t words_up_to(int m, int depth) {
  std::int64_t count = 0, level = 1;
  for (int i = 1; i <= depth; ++i) {
    if (level > (std::int64_t{1} << 40) / m) return std::int64_t{1} << 40;
    level *= m;
    count += level;
  }
  return count;
}

}  // namespace

QuasiMultReport estimate_D(const AffineSystem& sys, double t, int depth,
                           std::int64_t sample_budget) {
  if (depth < 1) throw input_error("estimate_D: depth must be >= 1");
  SvfExponent(t, sys.dim());  // domain check

  QuasiMultReport report;
  report.t = t;
  report.depth = depth;
  report.d_estimate = 1.0;

  const std::int64_t n_words = words_up_to(sys.map_count(), depth);
  const bool exhaustive =
      n_words <= sample_budget && n_words <= sample_budget / n_words;
  report.exhaustive = exhaustive;

  double min_log_ratio = 0.0;
  auto consider = [&](const Word& u, const Matrix& pu, double lu,
                      const Word& v, const Matrix& pv, double lv) {
    const double luv = log_phi(t, pu * pv);
    const double ratio = luv - lu - lv;
    if (ratio < min_log_ratio) {
      min_log_ratio = ratio;
      report.worst_left = u;
      report.worst_right = v;
    }
  };

  if (exhaustive) {
    WordTable table = enumerate_words(sys, t, depth);
    for (size_t i = 0; i < table.words.size(); ++i)
      for (size_t j = 0; j < table.words.size(); ++j)
        consider(table.words[i], table.products[i], table.log_phis[i],
                 table.words[j], table.products[j], table.log_phis[j]);
  } else {
    SplitMix64 rng(0x9D5Au ^ static_cast<std::uint64_t>(depth));
    const int m = sys.map_count();
    auto random_word = [&]() {
      const int len = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(depth)));
      std::vector<std::uint8_t> letters(static_cast<size_t>(len));
      for (auto& l : letters)
        l = static_cast<std::uint8_t>(rng.next_below(static_cast<std::uint32_t>(m)));
      return Word(std::move(letters), m);
    };
    for (std::int64_t s = 0; s < sample_budget; ++s) {
      const Word u = random_word();
      const Word v = random_word();
      const Matrix pu = word_cocycle(sys, u);
      const Matrix pv = word_cocycle(sys, v);
      consider(u, pu, log_phi(t, pu), v, pv, log_phi(t, pv));
    }
  }

  report.d_estimate = std::exp(min_log_ratio);
  return report;
}

namespace {

// Direction angle of T * (cos a, sin a), reduced mod pi to [0, pi).
double projective_image(const Matrix& t, double a) {
  const double x = t(0, 0) * std::cos(a) + t(0, 1) * std::sin(a);
  const double y = t(1, 0) * std::cos(a) + t(1, 1) * std::sin(a);
  double angle = std::atan2(y, x);
  while (angle < 0.0) angle += kPi;
  while (angle >= kPi) angle -= kPi;
  return angle;
}

double mod_pi(double a) {
  a = std::fmod(a, kPi);
  if (a < 0.0) a += kPi;
  return a;
}

// Arc position of x relative to start, in [0, pi).
double rel(double x, double start) { return mod_pi(x - start); }

// Image of the arc [start, start + width] under T, as (position of its
// start relative to `start`, its width). The image arc is the one of the
// two candidate arcs between the endpoint images that contains the image
// of the midpoint (homeomorphisms map interiors to interiors).
struct ArcImage {
  double pos;     // relative position of the image arc start
  double width;
};

ArcImage arc_image(const Matrix& t, double start, double width) {
  const double ia = projective_image(t, start);
  const double ib = projective_image(t, start + width);
  const double imid = projective_image(t, start + 0.5 * width);
  const double forward = mod_pi(ib - ia);  // width of arc a -> b
  const bool mid_in_forward = mod_pi(imid - ia) <= forward + 1e-15;
  if (mid_in_forward) {
    return {rel(ia, start), forward};
  }
  return {rel(ib, start), mod_pi(ia - ib)};
}

bool verify_candidate(const std::vector<Matrix>& parts, double start,
                      double width, double min_margin, double* achieved) {
  double worst = std::numeric_limits<double>::infinity();
  for (const Matrix& t : parts) {
    const ArcImage img = arc_image(t, start, width);
    const double head = img.pos;
    const double tail = width - (img.pos + img.width);
    if (img.pos + img.width > width) return false;  // leaves the arc
    worst = std::min(worst, std::min(head, tail));
  }
  if (achieved) *achieved = worst;
  return worst >= min_margin;
}

}  // namespace

std::optional<ProjectiveCone> cone_check_2d(const std::vector<Matrix>& parts,
                                            int angular_resolution) {
  if (parts.empty()) throw input_error("cone_check_2d: no matrices");
  for (const Matrix& t : parts) {
    if (t.dim() != 2) throw input_error("cone_check_2d: requires d = 2");
    if (t.det() == 0.0)
      throw input_error("cone_check_2d: singular linear part");
  }
  if (angular_resolution < 8)
    throw input_error("cone_check_2d: resolution too small");
  const double step = kPi / angular_resolution;

  // Candidate directions: T_w v for every word w of a fixed length n.
  // Long products align with their top singular direction, and those
  // directions fill the projective attractor, which lies inside any
  // strictly invariant cone. The candidate only needs to be a good
  // guess; the endpoint verification below is what certifies it.
  const int m_count = static_cast<int>(parts.size());
  int word_len = 1;
  {
    std::int64_t leaves = m_count;
    while (leaves <= 65536 / m_count && word_len < 16) {
      leaves *= m_count;
      ++word_len;
    }
  }
  std::vector<double> cloud;
  {
    const double u0 = 0.6, u1 = 0.8;  // fixed non-axis probe vector
    std::vector<std::pair<double, double>> frontier = {{u0, u1}};
    for (int level = 0; level < word_len; ++level) {
      std::vector<std::pair<double, double>> next;
      next.reserve(frontier.size() * parts.size());
      for (const auto& [x, y] : frontier) {
        for (const Matrix& t : parts) {
          double nx = t(0, 0) * x + t(0, 1) * y;
          double ny = t(1, 0) * x + t(1, 1) * y;
          // renormalize so deep products do not underflow
          const double norm = std::abs(nx) + std::abs(ny);
          if (norm > 0.0) {
            nx /= norm;
            ny /= norm;
          }
          next.emplace_back(nx, ny);
        }
      }
      frontier = std::move(next);
    }
    cloud.reserve(frontier.size());
    for (const auto& [x, y] : frontier) cloud.push_back(mod_pi(std::atan2(y, x)));
  }

  // Hull arc: complement of the largest gap between sorted directions.
  std::sort(cloud.begin(), cloud.end());
  double best_gap = kPi - cloud.back() + cloud.front();
  double gap_end = cloud.front();
  for (size_t i = 1; i < cloud.size(); ++i) {
    const double gap = cloud[i] - cloud[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      gap_end = cloud[i];
    }
  }
  const double hull_start = gap_end;
  const double hull_width = kPi - best_gap;
  if (hull_width >= kPi - 2.0 * step) return std::nullopt;

  // Pad outward until the endpoint check certifies strict containment.
  for (int pad_steps : {1, 2, 4, 8, 16, 32, 64, 128}) {
    const double pad = pad_steps * step;
    const double start = mod_pi(hull_start - pad);
    const double width = hull_width + 2.0 * pad;
    if (width >= kPi - 2.0 * step) break;
    double achieved = 0.0;
    if (verify_candidate(parts, start, width, step, &achieved)) {
      return ProjectiveCone{start, width, achieved};
    }
  }
  return std::nullopt;
}

std::optional<ProjectiveCone> cone_check_2d(const AffineSystem& sys,
                                            int angular_resolution) {
  if (sys.dim() != 2) throw input_error("cone_check_2d: requires d = 2");
  std::vector<Matrix> parts;
  parts.reserve(static_cast<size_t>(sys.map_count()));
  for (int i = 0; i < sys.map_count(); ++i) parts.push_back(sys.map(i).linear);
  return cone_check_2d(parts, angular_resolution);
}

bool cone_verify(const std::vector<Matrix>& parts, const ProjectiveCone& cone,
                 int angular_resolution) {
  if (angular_resolution < 1) throw input_error("cone_verify: bad resolution");
  const double step = kPi / angular_resolution;
  return verify_candidate(parts, cone.start, cone.width, step, nullptr);
}

ProjectedPoint project_word(const AffineSystem& sys, const Word& w) {
  if (!w.is_empty() && w.alphabet() != sys.map_count())
    throw input_error("project_word: word alphabet != map count");
  std::vector<double> x(static_cast<size_t>(sys.dim()), 0.0);
  for (std::int64_t i = w.length() - 1; i >= 0; --i) {
    const AffineContraction& f = sys.map(w.letter(i));
    x = f.linear.apply(x);
    for (int c = 0; c < sys.dim(); ++c) x[static_cast<size_t>(c)] += f.translation[static_cast<size_t>(c)];
  }
  const double radius =
      std::pow(sys.sigma_plus(), static_cast<double>(w.length())) *
      sys.invariant_ball_radius();
  return {std::move(x), radius};
}

}  // namespace affine_recur
