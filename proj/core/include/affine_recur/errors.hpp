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

#ifndef AFFINE_RECUR_ERRORS_HPP_
#define AFFINE_RECUR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace affine_recur {

/// Bad argument: non-finite entries, dimension mismatch, out-of-range
/// exponent, violated precondition.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested computation exceeds a configured work or memory cap
/// (word-tree too deep, sampling depth too large). The message says
/// which cap and how to raise it.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace affine_recur

#endif  // AFFINE_RECUR_ERRORS_HPP_
