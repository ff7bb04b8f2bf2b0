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

#ifndef MISOLOC_MODEL_HPP
#define MISOLOC_MODEL_HPP

#include <Eigen/Dense>
#include <cassert>
#include <sstream>
#include <vector>

#include "misoloc/config.hpp"
#include "misoloc/rng.hpp"

namespace misoloc {

/// One propagation path: complex gain, one-way delay and departure angle.
struct PathParams {
  cplx gain{0.0, 0.0};   ///< alpha = h / sqrt(rho)
  double delay_s = 0.0;  ///< tau, must stay below N * T_s
  double aod_rad = 0.0;  ///< theta in (-pi/2, pi/2) for the ULA half-plane
};

/// The channel the simulator draws observations from. The line-of-sight
/// path comes first; reflected paths (possibly none) are appended with
/// delays strictly larger than the direct one.
struct ChannelRealization {
  PathParams los;
  std::vector<PathParams> nlos;
  Eigen::Vector2d ms_position_m{0.0, 0.0};
};

/// The known effective transmit vectors s^g[n] across transmissions and
/// subcarriers. transmissions[g] is an N x N_BS matrix whose n-th row is
/// s^g[n]^T, which is also exactly the regressor matrix the unstructured
/// estimator works with.
struct PilotBook {
  std::vector<Eigen::MatrixXcd> transmissions;
  std::uint64_t seed = 0;

  int n_transmissions() const {
    return static_cast<int>(transmissions.size());
  }
  int n_subcarriers() const {
    return transmissions.empty() ? 0
                                 : static_cast<int>(transmissions[0].rows());
  }
  int n_antennas() const {
    return transmissions.empty() ? 0
                                 : static_cast<int>(transmissions[0].cols());
  }

  /// s^g[n] as a column vector.
  Eigen::VectorXcd pilot(int g, int n) const {
    return transmissions[g].row(n).transpose();
  }

  void check_dimensions(const SystemConfig& config) const {
    if (n_transmissions() != config.n_transmissions ||
        n_subcarriers() != config.n_subcarriers ||
        n_antennas() != config.n_bs_antennas) {
      std::ostringstream err;
      err << "pilot book dimensions (G=" << n_transmissions()
          << ", N=" << n_subcarriers() << ", N_BS=" << n_antennas()
          << ") do not match system config (G=" << config.n_transmissions
          << ", N=" << config.n_subcarriers
          << ", N_BS=" << config.n_bs_antennas << ")";
      throw config_error(err.str());
    }
  }
};

/// The N x G matrix of received samples, entry (n, g) = y^g[n], together
/// with the noise variance used when it was generated.
struct ObservationSet {
  Eigen::MatrixXcd samples;
  double noise_variance = 0.0;

  int n_subcarriers() const { return static_cast<int>(samples.rows()); }
  int n_transmissions() const { return static_cast<int>(samples.cols()); }
};

/// ULA steering vector: element k carries phase k * (2*pi/lambda_c) * d *
/// sin(theta), the whole vector scaled to unit Euclidean norm.
inline Eigen::VectorXcd steering_vector(double theta,
                                        const SystemConfig& config) {
  const int n_bs = config.n_bs_antennas;
  const double phase_step =
      2.0 * pi / config.wavelength_m() * config.element_spacing() *
      std::sin(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_bs));
  Eigen::VectorXcd a(n_bs);
  for (int k = 0; k < n_bs; ++k) a(k) = std::polar(scale, k * phase_step);
  return a;
}

/// Per-subcarrier delay rotation exp(-j * 2*pi * n * tau / (N * T_s)).
/// Periodic in tau with period N * T_s; delays are meaningful modulo that.
inline cplx delay_phasor(double tau, int n, const SystemConfig& config) {
  assert(n >= 0 && n < config.n_subcarriers);
  return std::polar(1.0,
                    -2.0 * pi * n * tau / config.max_unambiguous_delay_s());
}

/// Row n of the frequency-domain channel:
/// sqrt(N_BS) * sum_p alpha_p * delay_phasor(tau_p, n) * a^H(theta_p).
/// Additive over paths; an empty NLOS list gives the single-path model.
inline Eigen::RowVectorXcd channel_row(int n, const ChannelRealization& paths,
                                       const SystemConfig& config) {
  const double root_nbs = std::sqrt(static_cast<double>(config.n_bs_antennas));
  Eigen::RowVectorXcd row =
      Eigen::RowVectorXcd::Zero(config.n_bs_antennas);
  auto accumulate = [&](const PathParams& p) {
    row += (root_nbs * p.gain * delay_phasor(p.delay_s, n, config)) *
           steering_vector(p.aod_rad, config).adjoint();
  };
  accumulate(paths.los);
  for (const PathParams& p : paths.nlos) accumulate(p);
  return row;
}

/// Draws a pilot book: every element of every s^g[n] is a unit-modulus
/// phasor with phase i.i.d. uniform on [0, 2*pi), after which each vector
/// is rescaled to the configured pilot norm (the default keeps the raw
/// entries). Bit-identical for identical (config, seed); draw order is
/// g-major, then subcarrier, then antenna.
inline PilotBook generate_pilots(const SystemConfig& config,
                                 std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  // Unit-modulus entries make the raw vector norm sqrt(N_BS) exactly.
  const double scale = config.pilot_vector_norm() /
                       std::sqrt(static_cast<double>(config.n_bs_antennas));
  PilotBook book;
  book.seed = seed;
  book.transmissions.reserve(config.n_transmissions);
  for (int g = 0; g < config.n_transmissions; ++g) {
    Eigen::MatrixXcd xbar(config.n_subcarriers, config.n_bs_antennas);
    for (int n = 0; n < config.n_subcarriers; ++n)
      for (int k = 0; k < config.n_bs_antennas; ++k)
        xbar(n, k) = scale * rng.unit_phasor();
    book.transmissions.push_back(std::move(xbar));
  }
  return book;
}

/// Synthesizes the observation matrix y^g[n] = h^T[n] s^g[n] + nu^g[n]
/// with nu i.i.d. circular complex Gaussian of variance sigma2.
/// Deterministic given the seed; noise draw order is column-major (g, then n).
inline ObservationSet synthesize(const SystemConfig& config,
                                 const PilotBook& pilots,
                                 const ChannelRealization& channel,
                                 double sigma2, std::uint64_t seed) {
  pilots.check_dimensions(config);
  if (sigma2 < 0.0)
    throw config_error("noise variance must be nonnegative");
  const int n_sub = config.n_subcarriers;
  const int n_tx = config.n_transmissions;

  Eigen::MatrixXcd y(n_sub, n_tx);
  for (int n = 0; n < n_sub; ++n) {
    const Eigen::RowVectorXcd h = channel_row(n, channel, config);
    for (int g = 0; g < n_tx; ++g)
      y(n, g) = h * pilots.pilot(g, n);
  }
  Rng rng(seed);
  for (int g = 0; g < n_tx; ++g)
    for (int n = 0; n < n_sub; ++n) y(n, g) += rng.circular_gaussian(sigma2);
  return ObservationSet{std::move(y), sigma2};
}

}  // namespace misoloc

#endif  // MISOLOC_MODEL_HPP
