// SPDX-License-Identifier: Apache-2.0
//
// misoloc — single-anchor mmWave MISO downlink positioning:
// observation synthesis, TOF/AOD estimators, and Fisher-information bounds.
// Copyright (C) 2026 The misoloc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MISOLOC_RNG_HPP
#define MISOLOC_RNG_HPP

#include <cstdint>
#include <random>

#include "misoloc/common.hpp"

namespace misoloc {

/// Finalizer of the splitmix64 generator; bijective 64-bit mixing.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent sub-seed from a base seed and a stream tag.
/// The derivation is the fixed formula splitmix64(base ^ splitmix64(tag)),
/// so any component (pilots, channel phases, noise, geometry) can be
/// regenerated in isolation from the master seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream));
}

/// Fixed stream tags for the per-experiment sub-seeds.
namespace seed_stream {
inline constexpr std::uint64_t pilots = 0x50494C4F54ULL;
inline constexpr std::uint64_t channel = 0x4348414EULL;
inline constexpr std::uint64_t noise = 0x4E4F495345ULL;
inline constexpr std::uint64_t geometry = 0x47454F4DULL;
inline constexpr std::uint64_t trial = 0x545249414CULL;
inline constexpr std::uint64_t cell = 0x43454C4CULL;
inline constexpr std::uint64_t bench = 0x42454E4348ULL;
}  // namespace seed_stream

/// Seed of trial t inside a cell: two-level derivation so the trial count
/// can change without perturbing earlier trials.
inline std::uint64_t trial_seed(std::uint64_t cell_seed, int t) {
  return derive_seed(derive_seed(cell_seed, seed_stream::trial),
                     static_cast<std::uint64_t>(t));
}

/// Deterministic random source. The engine is the standard-specified
/// mt19937_64; the uniform and Gaussian transforms are implemented here
/// (53-bit mantissa scaling, Box-Muller) instead of the std distributions,
/// whose output is implementation-defined and would break bit-level
/// reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one fresh pair per call, cosine leg).
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

  /// Circularly symmetric complex Gaussian with total variance sigma2
  /// (real and imaginary parts each carry sigma2 / 2).
  cplx circular_gaussian(double sigma2) {
    const double s = std::sqrt(0.5 * sigma2);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
  }

  /// Unit-modulus phasor with phase uniform on [0, 2*pi).
  cplx unit_phasor() { return std::polar(1.0, uniform(0.0, 2.0 * pi)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace misoloc

#endif  // MISOLOC_RNG_HPP
