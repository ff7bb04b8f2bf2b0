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

#ifndef MISOLOC_COMMON_HPP
#define MISOLOC_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace misoloc {

using cplx = std::complex<double>;

/// Speed of light in vacuum [m/s], exact by SI definition.
inline constexpr double speed_of_light = 299792458.0;

/// Boltzmann constant [J/K], exact by SI definition.
inline constexpr double boltzmann = 1.380649e-23;

inline constexpr double pi = 3.141592653589793238462643383279502884;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Malformed or inconsistent configuration (bad scenario key, dimension
/// mismatch between pilots and system settings, invalid sweep spec, ...).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A linear-algebra step lost rank: the pilot design does not support the
/// requested solve (reciprocal condition below 1e-12, or a hard dimension
/// precondition such as N >= N_BS / G >= N_BS is violated).
class rank_deficiency_error : public std::runtime_error {
 public:
  explicit rank_deficiency_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// Input carries no usable signal energy (e.g. an all-zero pilot book).
class degenerate_input_error : public std::invalid_argument {
 public:
  explicit degenerate_input_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// The requested estimator cannot run on this configuration
/// (method-of-moments needs G >= N_BS).
class inapplicable_estimator_error : public std::runtime_error {
 public:
  explicit inapplicable_estimator_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// A Fisher information matrix is singular (or numerically too close to
/// singular to invert); carries a diagnosis of the cause when known.
class singular_fim_error : public std::runtime_error {
 public:
  explicit singular_fim_error(const std::string& what)
      : std::runtime_error(what) {}
};

inline const char* version() {
#ifdef MISOLOC_VERSION
  return MISOLOC_VERSION;
#else
  return "0.1.0";
#endif
}

}  // namespace misoloc

#endif  // MISOLOC_COMMON_HPP
