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

#ifndef MISOLOC_GEOMETRY_HPP
#define MISOLOC_GEOMETRY_HPP

#include <algorithm>

#include "misoloc/model.hpp"
#include "misoloc/pathloss.hpp"

namespace misoloc {

/// Parameters of the single-bounce reflector environment.
struct NlosEnvironment {
  double reflector_density_per_m = 1.0 / 7.0;
  double reflection_loss = db_to_linear(-10.0);  ///< mean sigma0^2, linear
  double reflection_loss_sigma_db = 4.0;  ///< lognormal RMS deviation [dB]
};

namespace detail {

inline void check_front_half_plane(double aod) {
  if (!(std::abs(aod) < 0.5 * pi))
    throw std::domain_error(
        "geometry: position must lie in the array front half-plane "
        "(|aod| < pi/2)");
}

}  // namespace detail

/// Direct path implied by an MS position: delay |p|/c, departure angle
/// atan2(p_y, p_x), gain sqrt(P_t / rho_los) * exp(j*phase).
/// Positions at the origin, behind the array, or beyond the unambiguous
/// delay support c * N * T_s are rejected.
inline PathParams los_path(const SystemConfig& config,
                           const Eigen::Vector2d& position, double phase) {
  const double dist = position.norm();
  if (!(dist > 0.0))
    throw std::domain_error("geometry: MS must not sit on the BS origin");
  const double delay = dist / speed_of_light;
  if (delay >= config.max_unambiguous_delay_s())
    throw std::domain_error(
        "geometry: MS distance exceeds the unambiguous delay support "
        "c * N * T_s");
  const double aod = std::atan2(position.y(), position.x());
  detail::check_front_half_plane(aod);
  PathParams p;
  p.delay_s = delay;
  p.aod_rad = aod;
  p.gain = std::polar(
      std::sqrt(config.tx_power_watts / los_pathloss(dist, config)), phase);
  return p;
}

/// LOS-only channel at the given position with the given gain phase.
inline ChannelRealization los_channel(const SystemConfig& config,
                                      const Eigen::Vector2d& position,
                                      double gain_phase_rad) {
  ChannelRealization ch;
  ch.los = los_path(config, position, gain_phase_rad);
  ch.ms_position_m = position;
  return ch;
}

namespace detail {

/// Scatterer on the ellipse of constant total path length around the
/// BS-MS segment, at eccentric parameter t. Requires path_len > |p|.
inline Eigen::Vector2d ellipse_point(const Eigen::Vector2d& ms,
                                     double path_len, double t) {
  const double dist = ms.norm();
  const double a = 0.5 * path_len;
  const double c_f = 0.5 * dist;
  const double b = std::sqrt(a * a - c_f * c_f);
  const Eigen::Vector2d u = ms / dist;
  const Eigen::Vector2d v(-u.y(), u.x());
  return 0.5 * ms + (a * std::cos(t)) * u + (b * std::sin(t)) * v;
}

inline PathParams reflected_path(const SystemConfig& config,
                                 const Eigen::Vector2d& scatterer,
                                 double path_len, double amplitude,
                                 double phase) {
  PathParams p;
  p.delay_s = path_len / speed_of_light;
  p.aod_rad = std::atan2(scatterer.y(), scatterer.x());
  p.gain = std::polar(amplitude, phase);
  return p;
}

}  // namespace detail

/// Appends `count` single-bounce reflectors drawn uniformly at random in
/// the front-half service disc of radius disc_radius_m. Path length is
/// BS->scatterer->MS, the departure angle points at the scatterer, and the
/// per-path reflection loss gets an independent lognormal deviation.
/// Draws per path: gain phase, loss deviation, then scatterer candidates.
inline void add_disc_reflectors(ChannelRealization& channel,
                                const SystemConfig& config,
                                const NlosEnvironment& env, int count,
                                double disc_radius_m, Rng& rng) {
  const double max_len = 0.98 * speed_of_light *
                         config.max_unambiguous_delay_s();
  const double los_len = channel.ms_position_m.norm();
  for (int k = 0; k < count; ++k) {
    const double phase = rng.uniform(0.0, 2.0 * pi);
    const double sigma_sq =
        env.reflection_loss *
        db_to_linear(rng.gaussian(0.0, env.reflection_loss_sigma_db));
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw config_error(
            "add_disc_reflectors: no admissible scatterer found; "
            "shrink the service disc or the MS distance");
      const double x = rng.uniform(-disc_radius_m, disc_radius_m);
      const double y = rng.uniform(-disc_radius_m, disc_radius_m);
      const Eigen::Vector2d s(x, y);
      if (s.norm() > disc_radius_m || s.x() <= 0.0) continue;
      const double len = s.norm() + (s - channel.ms_position_m).norm();
      if (len <= los_len || len >= max_len) continue;
      if (std::abs(std::atan2(s.y(), s.x())) >= 0.5 * pi) continue;
      const double rho =
          nlos_pathloss(len, env.reflector_density_per_m, sigma_sq, config);
      channel.nlos.push_back(detail::reflected_path(
          config, s, len, std::sqrt(config.tx_power_watts / rho), phase));
      break;
    }
  }
}

/// Appends `count` reflectors whose total power realizes the target
/// LOS-to-multipath ratio. Each path is assigned the equal power share
/// (1/rho_los) / (count * lmr), its distance is solved from the reflected
/// path-loss law (closed form, since the Poisson factor is the only
/// distance dependence left after the free-space terms cancel), and the
/// scatterer is placed at a uniform parameter angle on the ellipse of that
/// total path length. When the solved distance falls outside the physical
/// window it is clamped and the residual is absorbed into the path
/// amplitude, so the realized ratio hits the target regardless.
inline void add_lmr_reflectors(ChannelRealization& channel,
                               const SystemConfig& config,
                               const NlosEnvironment& env, int count,
                               double lmr_db, Rng& rng) {
  if (count < 1)
    throw config_error("add_lmr_reflectors: need at least one path");
  const double los_len = channel.ms_position_m.norm();
  if (!(los_len > 0.0))
    throw std::domain_error("add_lmr_reflectors: channel has no geometry");
  const double rho_los = los_pathloss(los_len, config);
  const double target_power =
      (1.0 / rho_los) / (count * db_to_linear(lmr_db));

  const double gamma = env.reflector_density_per_m;
  const double fs = config.wavelength_m() / (4.0 * pi);
  const double min_len = 1.05 * los_len;
  const double max_len =
      0.98 * speed_of_light * config.max_unambiguous_delay_s();
  if (min_len >= max_len)
    throw std::domain_error(
        "add_lmr_reflectors: MS too close to the delay support edge");

  for (int k = 0; k < count; ++k) {
    const double phase = rng.uniform(0.0, 2.0 * pi);
    const double sigma_sq =
        env.reflection_loss *
        db_to_linear(rng.gaussian(0.0, env.reflection_loss_sigma_db));
    // 1/rho_k = sigma_sq * gamma^2 * fs^2 * exp(-gamma * d): solve for d.
    double len = -std::log(target_power / (sigma_sq * gamma * gamma * fs * fs)) /
                 gamma;
    len = std::clamp(len, min_len, max_len);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw config_error(
            "add_lmr_reflectors: no admissible scatterer on the ellipse");
      const Eigen::Vector2d s = detail::ellipse_point(
          channel.ms_position_m, len, rng.uniform(0.0, 2.0 * pi));
      if (s.x() <= 0.0 || std::abs(std::atan2(s.y(), s.x())) >= 0.5 * pi)
        continue;
      channel.nlos.push_back(detail::reflected_path(
          config, s, len, std::sqrt(config.tx_power_watts * target_power),
          phase));
      break;
    }
  }
}

/// Ratio of LOS received power to summed reflected power implied by the
/// stored gains; +infinity when no reflected paths exist.
inline double realized_lmr(const ChannelRealization& channel) {
  double nlos_power = 0.0;
  for (const PathParams& p : channel.nlos) nlos_power += std::norm(p.gain);
  if (nlos_power == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(channel.los.gain) / nlos_power;
}

}  // namespace misoloc

#endif  // MISOLOC_GEOMETRY_HPP
