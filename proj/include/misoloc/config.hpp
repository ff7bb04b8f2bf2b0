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

#ifndef MISOLOC_CONFIG_HPP
#define MISOLOC_CONFIG_HPP

#include <sstream>

#include "misoloc/common.hpp"

namespace misoloc {

/// Immutable physical-layer context of one experiment: carrier, bandwidth,
/// array and pilot dimensions, transmit power, receiver noise reference.
///
/// Defaults reproduce the reference outdoor scenario used across the test
/// and experiment suites: a 10-element ULA base station at 60 GHz with
/// 40 MHz bandwidth, 20 subcarriers and 1 W transmit power.
struct SystemConfig {
  double carrier_frequency_hz = 60e9;
  double bandwidth_hz = 40e6;
  int n_subcarriers = 20;    ///< N
  int n_transmissions = 10;  ///< G
  int n_bs_antennas = 10;    ///< N_BS
  int n_beams = 1;           ///< M, simultaneously transmitted symbols
  double tx_power_watts = 1.0;
  /// ULA inter-element spacing [m]; <= 0 selects half a carrier wavelength.
  double element_spacing_m = 0.0;
  double noise_temperature_k = 290.0;
  double atmospheric_attenuation_db_per_km = 16.0;
  /// Euclidean norm each effective pilot vector s^g[n] is rescaled to after
  /// generation; <= 0 keeps the raw unit-modulus entries (vector norm
  /// sqrt(N_BS)). Transmit power is carried by the complex path gain.
  double pilot_norm = 0.0;

  double sampling_period_s() const { return 1.0 / bandwidth_hz; }
  double wavelength_m() const { return speed_of_light / carrier_frequency_hz; }
  double element_spacing() const {
    return element_spacing_m > 0.0 ? element_spacing_m : 0.5 * wavelength_m();
  }
  double pilot_vector_norm() const {
    return pilot_norm > 0.0 ? pilot_norm
                            : std::sqrt(static_cast<double>(n_bs_antennas));
  }
  /// Longest unambiguously representable delay, N * T_s.
  double max_unambiguous_delay_s() const {
    return n_subcarriers * sampling_period_s();
  }

  /// Throws config_error naming the first violated invariant.
  void validate() const {
    std::ostringstream err;
    if (!(carrier_frequency_hz > 0))
      err << "carrier_frequency_hz must be positive";
    else if (!(bandwidth_hz > 0))
      err << "bandwidth_hz must be positive";
    else if (n_subcarriers < 1)
      err << "n_subcarriers must be >= 1";
    else if (n_transmissions < 1)
      err << "n_transmissions must be >= 1";
    else if (n_bs_antennas < 1)
      err << "n_bs_antennas must be >= 1";
    else if (n_beams < 1)
      err << "n_beams must be >= 1";
    else if (n_beams > n_bs_antennas)
      err << "n_beams must not exceed n_bs_antennas";
    else if (!(tx_power_watts > 0))
      err << "tx_power_watts must be positive";
    else if (!(noise_temperature_k > 0))
      err << "noise_temperature_k must be positive";
    else if (atmospheric_attenuation_db_per_km < 0)
      err << "atmospheric_attenuation_db_per_km must be nonnegative";
    else
      return;
    throw config_error("system config: " + err.str());
  }
};

}  // namespace misoloc

#endif  // MISOLOC_CONFIG_HPP
