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

#ifndef MISOLOC_SCENARIO_HPP
#define MISOLOC_SCENARIO_HPP

#include <fstream>
#include <json.hpp>
#include <optional>

#include "misoloc/geometry.hpp"

namespace misoloc {

/// MS placement and multipath environment of a scenario. Position is given
/// either Cartesian (ms_position_x_m / ms_position_y_m) or polar
/// (ms_range_m / ms_angle_deg); mixing the two styles is rejected. When
/// nothing is set the reference geometry (30 m range, 40 deg) applies.
struct GeometryConfig {
  std::optional<double> ms_x_m;
  std::optional<double> ms_y_m;
  std::optional<double> ms_range_m;
  std::optional<double> ms_angle_deg;
  int n_nlos_paths = 0;
  std::optional<double> lmr_db;  ///< when set, reflectors realize this ratio
  double reflector_density_per_m = 1.0 / 7.0;
  double reflection_loss_db = -10.0;
  double reflection_loss_sigma_db = 4.0;
  std::optional<double> gain_phase_rad;  ///< fixes the LOS gain phase

  Eigen::Vector2d position() const {
    const bool cartesian = ms_x_m.has_value() || ms_y_m.has_value();
    const bool polar = ms_range_m.has_value() || ms_angle_deg.has_value();
    if (cartesian && polar)
      throw config_error(
          "geometry: give either ms_position_{x,y}_m or "
          "ms_range_m/ms_angle_deg, not both");
    if (cartesian) {
      if (!ms_x_m || !ms_y_m)
        throw config_error(
            "geometry: ms_position_x_m and ms_position_y_m must both be set");
      return {*ms_x_m, *ms_y_m};
    }
    const double range = ms_range_m.value_or(30.0);
    const double angle = ms_angle_deg.value_or(40.0) * pi / 180.0;
    return {range * std::cos(angle), range * std::sin(angle)};
  }

  NlosEnvironment environment() const {
    NlosEnvironment env;
    env.reflector_density_per_m = reflector_density_per_m;
    env.reflection_loss = db_to_linear(reflection_loss_db);
    env.reflection_loss_sigma_db = reflection_loss_sigma_db;
    return env;
  }
};

/// Grid-search settings shared by all estimators.
struct EstimationConfig {
  int grid_points = 150;   ///< per axis
  double d_max_m = 100.0;  ///< delay axis spans [0, d_max/c]
  int mm_lags = 1;
  bool refine = false;  ///< golden-section refinement after the grid argmin
};

/// One fully specified experiment context: system, geometry, noise level,
/// seeding and estimation settings.
struct Scenario {
  SystemConfig system;
  GeometryConfig geometry;
  /// When set, the noise variance is chosen so the transmit-referenced SNR
  /// at the LOS path loss equals this value; otherwise thermal k_B*T_0*B.
  std::optional<double> snr_db_target;
  std::uint64_t seed = 1;
  int n_trials = 200;
  bool freeze_pilots = false;  ///< one pilot book for all trials (ablation)
  EstimationConfig estimation;

  void validate() const {
    system.validate();
    const Eigen::Vector2d p = geometry.position();  // throws on bad styles
    if (!(p.norm() > 0.0))
      throw config_error("geometry: MS position must not be the origin");
    if (geometry.n_nlos_paths < 0)
      throw config_error("n_nlos_paths must be nonnegative");
    if (!(geometry.reflector_density_per_m > 0.0))
      throw config_error("reflector_density_per_m must be positive");
    if (geometry.reflection_loss_sigma_db < 0.0)
      throw config_error("reflection_loss_sigma_db must be nonnegative");
    if (n_trials < 1) throw config_error("n_trials must be >= 1");
    if (estimation.grid_points < 2)
      throw config_error("grid_points must be >= 2");
    if (!(estimation.d_max_m > 0.0))
      throw config_error("d_max_m must be positive");
    if (estimation.mm_lags < 1 ||
        estimation.mm_lags >= system.n_subcarriers)
      throw config_error("mm_lags must satisfy 1 <= mm_lags < n_subcarriers");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw config_error("scenario key '" + key + "': '" + value +
                       "' is not a number");
  }
  if (pos != value.size())
    throw config_error("scenario key '" + key + "': trailing characters in '" +
                       value + "'");
  return v;
}

inline long long parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v)
    throw config_error("scenario key '" + key + "' must be an integer, got '" +
                       value + "'");
  return i;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw config_error("scenario key '" + key + "': '" + value +
                     "' is not a boolean (true/false)");
}

}  // namespace detail

/// Applies one key = value pair. The same dispatch backs scenario files
/// and command-line overrides, so precedence is purely application order.
/// Unknown keys are rejected by name.
inline void apply_scenario_key(Scenario& sc, const std::string& key,
                               const std::string& value) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_int;
  if (key == "carrier_frequency_hz")
    sc.system.carrier_frequency_hz = parse_double(key, value);
  else if (key == "bandwidth_hz")
    sc.system.bandwidth_hz = parse_double(key, value);
  else if (key == "n_subcarriers")
    sc.system.n_subcarriers = static_cast<int>(parse_int(key, value));
  else if (key == "n_transmissions")
    sc.system.n_transmissions = static_cast<int>(parse_int(key, value));
  else if (key == "n_bs_antennas")
    sc.system.n_bs_antennas = static_cast<int>(parse_int(key, value));
  else if (key == "n_beams")
    sc.system.n_beams = static_cast<int>(parse_int(key, value));
  else if (key == "tx_power_watts")
    sc.system.tx_power_watts = parse_double(key, value);
  else if (key == "element_spacing_m")
    sc.system.element_spacing_m = parse_double(key, value);
  else if (key == "noise_temperature_k")
    sc.system.noise_temperature_k = parse_double(key, value);
  else if (key == "atmospheric_attenuation_db_per_km")
    sc.system.atmospheric_attenuation_db_per_km = parse_double(key, value);
  else if (key == "pilot_norm")
    sc.system.pilot_norm = parse_double(key, value);
  else if (key == "ms_position_x_m")
    sc.geometry.ms_x_m = parse_double(key, value);
  else if (key == "ms_position_y_m")
    sc.geometry.ms_y_m = parse_double(key, value);
  else if (key == "ms_range_m")
    sc.geometry.ms_range_m = parse_double(key, value);
  else if (key == "ms_angle_deg")
    sc.geometry.ms_angle_deg = parse_double(key, value);
  else if (key == "n_nlos_paths")
    sc.geometry.n_nlos_paths = static_cast<int>(parse_int(key, value));
  else if (key == "lmr_db")
    sc.geometry.lmr_db = parse_double(key, value);
  else if (key == "reflector_density_per_m")
    sc.geometry.reflector_density_per_m = parse_double(key, value);
  else if (key == "reflection_loss_db")
    sc.geometry.reflection_loss_db = parse_double(key, value);
  else if (key == "reflection_loss_sigma_db")
    sc.geometry.reflection_loss_sigma_db = parse_double(key, value);
  else if (key == "gain_phase_rad")
    sc.geometry.gain_phase_rad = parse_double(key, value);
  else if (key == "snr_db")
    sc.snr_db_target = parse_double(key, value);
  else if (key == "seed")
    sc.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "n_trials")
    sc.n_trials = static_cast<int>(parse_int(key, value));
  else if (key == "freeze_pilots")
    sc.freeze_pilots = parse_bool(key, value);
  else if (key == "grid_points")
    sc.estimation.grid_points = static_cast<int>(parse_int(key, value));
  else if (key == "d_max_m")
    sc.estimation.d_max_m = parse_double(key, value);
  else if (key == "mm_lags")
    sc.estimation.mm_lags = static_cast<int>(parse_int(key, value));
  else if (key == "refine")
    sc.estimation.refine = parse_bool(key, value);
  else
    throw config_error("scenario: unknown key '" + key + "'");
}

/// Parses the `key = value` scenario format ('#' starts a comment).
inline Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("scenario line " + std::to_string(line_no) +
                         ": expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw config_error("scenario line " + std::to_string(line_no) +
                         ": empty key or value");
    apply_scenario_key(sc, key, value);
  }
  return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw config_error("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

/// Fully resolved scenario as JSON (for run manifests).
inline nlohmann::json scenario_json(const Scenario& sc) {
  const Eigen::Vector2d p = sc.geometry.position();
  nlohmann::json j;
  j["system"] = {
      {"carrier_frequency_hz", sc.system.carrier_frequency_hz},
      {"bandwidth_hz", sc.system.bandwidth_hz},
      {"n_subcarriers", sc.system.n_subcarriers},
      {"n_transmissions", sc.system.n_transmissions},
      {"n_bs_antennas", sc.system.n_bs_antennas},
      {"n_beams", sc.system.n_beams},
      {"tx_power_watts", sc.system.tx_power_watts},
      {"element_spacing_m", sc.system.element_spacing()},
      {"noise_temperature_k", sc.system.noise_temperature_k},
      {"atmospheric_attenuation_db_per_km",
       sc.system.atmospheric_attenuation_db_per_km},
      {"pilot_norm", sc.system.pilot_norm},
  };
  j["geometry"] = {
      {"ms_position_x_m", p.x()},
      {"ms_position_y_m", p.y()},
      {"n_nlos_paths", sc.geometry.n_nlos_paths},
      {"reflector_density_per_m", sc.geometry.reflector_density_per_m},
      {"reflection_loss_db", sc.geometry.reflection_loss_db},
      {"reflection_loss_sigma_db", sc.geometry.reflection_loss_sigma_db},
  };
  if (sc.geometry.lmr_db) j["geometry"]["lmr_db"] = *sc.geometry.lmr_db;
  if (sc.geometry.gain_phase_rad)
    j["geometry"]["gain_phase_rad"] = *sc.geometry.gain_phase_rad;
  if (sc.snr_db_target) j["snr_db"] = *sc.snr_db_target;
  j["seed"] = sc.seed;
  j["n_trials"] = sc.n_trials;
  j["freeze_pilots"] = sc.freeze_pilots;
  j["estimation"] = {
      {"grid_points", sc.estimation.grid_points},
      {"d_max_m", sc.estimation.d_max_m},
      {"mm_lags", sc.estimation.mm_lags},
      {"refine", sc.estimation.refine},
  };
  return j;
}

}  // namespace misoloc

#endif  // MISOLOC_SCENARIO_HPP
