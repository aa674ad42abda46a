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

#ifndef AFFINE_RECUR_PRNG_HPP_
#define AFFINE_RECUR_PRNG_HPP_

#include <cstdint>

namespace affine_recur {

// SplitMix64. Used everywhere randomness must be reproducible across
// platforms and thread counts: pure 64-bit integer arithmetic, no
// library-dependent distributions. Streams are derived by mixing a base
// seed with a stream index, so sample i of run (seed) is independent of
// how samples are scheduled onto workers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on {0, ..., n-1}, n >= 1. Modulo bias is < n / 2^64.
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next_u64() % n);
  }

  /// Derive an independent stream for (seed, index) pairs.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    // burn one output so adjacent indices decorrelate
    mixer.next_u64();
    return mixer;
  }

 private:
  std::uint64_t state_;
};

/// Stateless hash of (seed, index) to a single uniform value; used for
/// random-access letter streams of sampled target points.
inline std::uint64_t mix_u64(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0xd1342543de82ef95ULL * (index + 1)));
  return g.next_u64();
}

}  // namespace affine_recur

#endif  // AFFINE_RECUR_PRNG_HPP_
