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

#ifndef MISOLOC_PATHLOSS_HPP
#define MISOLOC_PATHLOSS_HPP

#include <limits>
#include <vector>

#include "misoloc/config.hpp"

namespace misoloc {

/// Line-of-sight path loss rho at distance d0:
///   1/rho = mu^2(d0) * (lambda_c / (4*pi*d0))^2
/// where mu^2(d0) is the atmospheric attenuation, in dB equal to
/// -attenuation_db_per_km * d0 / 1000.
inline double los_pathloss(double d0, const SystemConfig& config) {
  if (!(d0 > 0.0))
    throw std::domain_error("los_pathloss: distance must be positive");
  const double atm =
      db_to_linear(-config.atmospheric_attenuation_db_per_km * d0 / 1000.0);
  const double fs = config.wavelength_m() / (4.0 * pi * d0);
  return 1.0 / (atm * fs * fs);
}

/// Single-bounce reflected path loss rho_k for total path length dk:
///   1/rho_k = sigma0_sq * (gamma_r*dk)^2 * exp(-gamma_r*dk)
///             * (lambda_c / (4*pi*dk))^2
/// with reflector density gamma_r [1/m] and mean reflection loss sigma0_sq
/// (linear scale).
inline double nlos_pathloss(double dk, double reflector_density,
                            double sigma0_sq, const SystemConfig& config) {
  if (!(dk > 0.0))
    throw std::domain_error("nlos_pathloss: path length must be positive");
  if (!(reflector_density > 0.0))
    throw std::domain_error("nlos_pathloss: density must be positive");
  if (!(sigma0_sq > 0.0))
    throw std::domain_error("nlos_pathloss: reflection loss must be positive");
  const double gd = reflector_density * dk;
  const double fs = config.wavelength_m() / (4.0 * pi * dk);
  return 1.0 / (sigma0_sq * gd * gd * std::exp(-gd) * fs * fs);
}

/// Thermal noise power k_B * T_0 * B [W].
inline double thermal_noise_power(const SystemConfig& config) {
  return boltzmann * config.noise_temperature_k * config.bandwidth_hz;
}

/// Transmit-referenced SNR in dB: 10*log10(P_t / (rho * k_B * T_0 * B)).
inline double snr_db(const SystemConfig& config, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("snr_db: rho must be positive");
  return linear_to_db(config.tx_power_watts /
                      (rho * thermal_noise_power(config)));
}

/// Noise variance that realizes a target SNR at path loss rho,
/// sigma2 = P_t / (rho * 10^(snr_db/10)).
inline double noise_variance_for_snr(const SystemConfig& config, double rho,
                                     double target_snr_db) {
  if (!(rho > 0.0))
    throw std::domain_error("noise_variance_for_snr: rho must be positive");
  return config.tx_power_watts / (rho * db_to_linear(target_snr_db));
}

/// LOS-to-multipath power ratio (linear): (1/rho_los) / sum_k (1/rho_k).
/// An empty reflected-path list returns +infinity.
inline double lmr(double rho_los, const std::vector<double>& rho_nlos) {
  if (!(rho_los > 0.0))
    throw std::domain_error("lmr: rho_los must be positive");
  double nlos_power = 0.0;
  for (double rho : rho_nlos) {
    if (!(rho > 0.0))
      throw std::domain_error("lmr: all path losses must be positive");
    nlos_power += 1.0 / rho;
  }
  if (nlos_power == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 / rho_los) / nlos_power;
}

}  // namespace misoloc

#endif  // MISOLOC_PATHLOSS_HPP
