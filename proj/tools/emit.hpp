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
// Deterministic emission: CSV tables (RFC 4180, LF line endings, '.'
// decimal point, fixed column order), JSON summaries with stable key
// order, and binary P6 pixmaps. Primary outputs must be byte-identical
// across runs and thread counts, so nothing here depends on locale,
// time, or scheduling.

#ifndef AFFINE_RECUR_TOOLS_EMIT_HPP_
#define AFFINE_RECUR_TOOLS_EMIT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace affine_recur::cli {

/// Shortest text that round-trips the double ("%.17g" fallback).
std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void add_row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  size_t columns_;
  std::string text_;
};

/// 8-bit RGB raster with white background.
class Raster {
 public:
  Raster(int width, int height);
  int width() const { return width_; }
  int height() const { return height_; }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  std::string to_p6() const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> rgb_;
};

void write_file(const std::string& path, const std::string& bytes);

}  // namespace affine_recur::cli

#endif  // AFFINE_RECUR_TOOLS_EMIT_HPP_
