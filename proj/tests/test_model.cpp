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

#include <catch2/catch_amalgamated.hpp>

#include "misoloc/geometry.hpp"
#include "misoloc/model.hpp"
#include "misoloc/pathloss.hpp"

using namespace misoloc;
using Catch::Approx;

namespace {

SystemConfig small_config() {
  SystemConfig cfg;
  cfg.n_bs_antennas = 4;
  cfg.n_subcarriers = 8;
  cfg.n_transmissions = 2;
  cfg.n_beams = 1;
  return cfg;
}

}  // namespace

TEST_CASE("steering vector closed forms", "[model]") {
  SystemConfig cfg;
  cfg.n_bs_antennas = 4;

  SECTION("broadside zeroes all phases") {
    const Eigen::VectorXcd a = steering_vector(0.0, cfg);
    for (int k = 0; k < 4; ++k) {
      REQUIRE(a(k).real() == Approx(0.5).margin(1e-15));
      REQUIRE(a(k).imag() == Approx(0.0).margin(1e-15));
    }
  }
  SECTION("endfire alternates sign at half-wavelength spacing") {
    const Eigen::VectorXcd a = steering_vector(pi / 2.0, cfg);
    for (int k = 0; k < 4; ++k) {
      const double expected = (k % 2 == 0) ? 0.5 : -0.5;
      REQUIRE(std::abs(a(k) - cplx(expected, 0.0)) < 1e-12);
    }
  }
  SECTION("30 degrees on a 2-element array gives a quadrature pair") {
    cfg.n_bs_antennas = 2;
    const Eigen::VectorXcd a = steering_vector(pi / 6.0, cfg);
    const double s = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(a(0) - cplx(s, 0.0)) < 1e-12);
    REQUIRE(std::abs(a(1) - cplx(0.0, s)) < 1e-12);
  }
}

TEST_CASE("steering vector has unit norm for random angles", "[model]") {
  SystemConfig cfg;
  cfg.n_bs_antennas = 10;
  Rng rng(123);
  for (int i = 0; i < 10000; ++i) {
    const double theta = rng.uniform(-pi / 2.0, pi / 2.0);
    REQUIRE(std::abs(steering_vector(theta, cfg).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("delay phasor values and periodicity", "[model]") {
  SystemConfig cfg;  // N = 20, T_s = 25 ns

  SECTION("zero delay is unity on every subcarrier") {
    for (int n = 0; n < cfg.n_subcarriers; ++n)
      REQUIRE(delay_phasor(0.0, n, cfg) == cplx(1.0, 0.0));
  }
  SECTION("a full support wrap returns to unity") {
    const double tau = cfg.max_unambiguous_delay_s();
    for (int n = 0; n < cfg.n_subcarriers; ++n)
      REQUIRE(std::abs(delay_phasor(tau, n, cfg) - cplx(1.0, 0.0)) < 1e-12);
  }
  SECTION("one sampling period at the middle subcarrier is -1") {
    REQUIRE(std::abs(delay_phasor(cfg.sampling_period_s(), 10, cfg) -
                     cplx(-1.0, 0.0)) < 1e-12);
  }
  SECTION("periodic in tau with period N * T_s") {
    Rng rng(5);
    const double period = cfg.max_unambiguous_delay_s();
    for (int i = 0; i < 100; ++i) {
      const double tau = rng.uniform(0.0, period);
      for (int n = 0; n < cfg.n_subcarriers; ++n)
        REQUIRE(std::abs(delay_phasor(tau + period, n, cfg) -
                         delay_phasor(tau, n, cfg)) < 1e-12);
    }
  }
  SECTION("unit modulus always") {
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
      const double tau = rng.uniform(0.0, 1e-6);
      const int n = static_cast<int>(rng.uniform(0, cfg.n_subcarriers));
      REQUIRE(std::abs(std::abs(delay_phasor(tau, n, cfg)) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("channel row closed forms and additivity", "[model]") {
  SystemConfig cfg = small_config();

  SECTION("single broadside zero-delay path of unit gain") {
    ChannelRealization ch;
    ch.los = PathParams{cplx(1.0, 0.0), 0.0, 0.0};
    const Eigen::RowVectorXcd row = channel_row(0, ch, cfg);
    // sqrt(4) * (1/2) * [1 1 1 1]
    for (int k = 0; k < 4; ++k)
      REQUIRE(std::abs(row(k) - cplx(1.0, 0.0)) < 1e-12);
  }
  SECTION("zero gains give the zero vector") {
    ChannelRealization ch;
    ch.los = PathParams{cplx(0.0, 0.0), 3e-8, 0.4};
    ch.nlos.push_back(PathParams{cplx(0.0, 0.0), 9e-8, -0.2});
    for (int n = 0; n < cfg.n_subcarriers; ++n)
      REQUIRE(channel_row(n, ch, cfg).norm() == 0.0);
  }
  SECTION("two-path row equals the sum of single-path rows") {
    const PathParams p1{cplx(0.8, -0.1), 4e-8, 0.3};
    const PathParams p2{cplx(-0.2, 0.5), 1.1e-7, -0.7};
    ChannelRealization both, only1, only2;
    both.los = p1;
    both.nlos.push_back(p2);
    only1.los = p1;
    only2.los = p2;
    for (int n = 0; n < cfg.n_subcarriers; ++n) {
      const Eigen::RowVectorXcd expected =
          channel_row(n, only1, cfg) + channel_row(n, only2, cfg);
      REQUIRE((channel_row(n, both, cfg) - expected).norm() == 0.0);
    }
  }
}

TEST_CASE("pilot book generation", "[model]") {
  SystemConfig cfg = small_config();

  SECTION("deterministic for a fixed seed") {
    const PilotBook a = generate_pilots(cfg, 42);
    const PilotBook b = generate_pilots(cfg, 42);
    REQUIRE(a.transmissions.size() == b.transmissions.size());
    for (std::size_t g = 0; g < a.transmissions.size(); ++g)
      REQUIRE((a.transmissions[g] - b.transmissions[g]).norm() == 0.0);
  }
  SECTION("dimensions follow the config") {
    const PilotBook book = generate_pilots(cfg, 7);
    REQUIRE(book.n_transmissions() == cfg.n_transmissions);
    REQUIRE(book.n_subcarriers() == cfg.n_subcarriers);
    REQUIRE(book.n_antennas() == cfg.n_bs_antennas);
  }
  SECTION("entries are unit-modulus phasors by default") {
    const PilotBook book = generate_pilots(cfg, 7);
    for (const auto& xbar : book.transmissions)
      for (int n = 0; n < xbar.rows(); ++n)
        for (int k = 0; k < xbar.cols(); ++k)
          REQUIRE(std::abs(std::abs(xbar(n, k)) - 1.0) < 1e-12);
  }
  SECTION("a configured pilot norm rescales every vector") {
    cfg.pilot_norm = 2.5;
    const PilotBook book = generate_pilots(cfg, 7);
    for (const auto& xbar : book.transmissions)
      for (int n = 0; n < xbar.rows(); ++n)
        REQUIRE(xbar.row(n).norm() == Approx(2.5).margin(1e-12));
  }
  SECTION("different seeds give different books") {
    const PilotBook a = generate_pilots(cfg, 1);
    const PilotBook b = generate_pilots(cfg, 2);
    double diff = 0.0;
    for (std::size_t g = 0; g < a.transmissions.size(); ++g)
      diff += (a.transmissions[g] - b.transmissions[g]).norm();
    REQUIRE(diff > 1e-6);
  }
}

TEST_CASE("line-of-sight path loss", "[model]") {
  SystemConfig cfg;  // 60 GHz, 16 dB/km

  SECTION("free-space term is unity at lambda/(4 pi)") {
    cfg.atmospheric_attenuation_db_per_km = 0.0;
    const double d0 = cfg.wavelength_m() / (4.0 * pi);
    REQUIRE(1.0 / los_pathloss(d0, cfg) == Approx(1.0).epsilon(1e-12));
  }
  SECTION("doubling the distance costs 6.0206 dB without attenuation") {
    cfg.atmospheric_attenuation_db_per_km = 0.0;
    const double drop = linear_to_db(1.0 / los_pathloss(20.0, cfg)) -
                        linear_to_db(1.0 / los_pathloss(40.0, cfg));
    REQUIRE(drop == Approx(6.020599913279624).margin(1e-9));
  }
  SECTION("50 m at 60 GHz with 16 dB/km") {
    // Free space -101.9902 dB plus 0.8 dB atmospheric absorption,
    // evaluated independently.
    const double db = linear_to_db(1.0 / los_pathloss(50.0, cfg));
    REQUIRE(db == Approx(-102.79020831627662).margin(1e-9));
  }
  SECTION("monotone decreasing received power in distance") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
      const double d = rng.uniform(0.5, 120.0);
      REQUIRE(los_pathloss(d * 1.01, cfg) > los_pathloss(d, cfg));
    }
  }
  SECTION("rejects nonpositive distances") {
    REQUIRE_THROWS_AS(los_pathloss(0.0, cfg), std::domain_error);
    REQUIRE_THROWS_AS(los_pathloss(-3.0, cfg), std::domain_error);
  }
}

TEST_CASE("reflected path loss", "[model]") {
  SystemConfig cfg;
  const double gamma_r = 1.0 / 7.0;
  const double sigma0 = db_to_linear(-10.0);

  SECTION("short-distance limit is finite") {
    // (gamma_r d)^2 / d^2 cancels the distance, leaving
    // sigma0^2 gamma_r^2 (lambda/4pi)^2 = 3.2264e-10 (evaluated
    // independently).
    const double limit = 1.0 / nlos_pathloss(1e-9, gamma_r, sigma0, cfg);
    REQUIRE(limit == Approx(3.226436313573385e-10).epsilon(1e-9));
  }
  SECTION("at d = 1/gamma_r the Poisson factor is exp(-1)") {
    const double received = 1.0 / nlos_pathloss(7.0, gamma_r, sigma0, cfg);
    REQUIRE(received == Approx(1.1869395880126254e-10).epsilon(1e-9));
  }
  SECTION("rejects nonpositive inputs") {
    REQUIRE_THROWS_AS(nlos_pathloss(0.0, gamma_r, sigma0, cfg),
                      std::domain_error);
    REQUIRE_THROWS_AS(nlos_pathloss(7.0, 0.0, sigma0, cfg),
                      std::domain_error);
    REQUIRE_THROWS_AS(nlos_pathloss(7.0, gamma_r, 0.0, cfg),
                      std::domain_error);
  }
}

TEST_CASE("transmit-referenced SNR", "[model]") {
  SystemConfig cfg;
  const double rho = los_pathloss(50.0, cfg);

  SECTION("doubling the transmit power adds 3.0103 dB") {
    SystemConfig hot = cfg;
    hot.tx_power_watts = 2.0;
    REQUIRE(snr_db(hot, rho) - snr_db(cfg, rho) ==
            Approx(3.0102999566398120).margin(1e-9));
  }
  SECTION("doubling the bandwidth at fixed path loss costs 3.0103 dB") {
    SystemConfig wide = cfg;
    wide.bandwidth_hz = 2.0 * cfg.bandwidth_hz;
    REQUIRE(snr_db(cfg, rho) - snr_db(wide, rho) ==
            Approx(3.0102999566398120).margin(1e-9));
  }
  SECTION("paper-scale receiver noise floor") {
    // k_B * 290 K * 40 MHz = 1.6016e-13 W = -127.9546 dBW; with the 50 m
    // path loss above this puts the SNR at 25.164 dB for 1 W transmit.
    REQUIRE(thermal_noise_power(cfg) ==
            Approx(1.6015528399999999e-13).epsilon(1e-12));
    REQUIRE(snr_db(cfg, rho) == Approx(25.16437896467187).margin(1e-9));
  }
  SECTION("noise variance for a target SNR inverts the definition") {
    const double sigma2 = noise_variance_for_snr(cfg, rho, 12.5);
    SystemConfig c = cfg;
    REQUIRE(linear_to_db(c.tx_power_watts / (rho * sigma2)) ==
            Approx(12.5).margin(1e-9));
  }
}

TEST_CASE("LOS-to-multipath ratio", "[model]") {
  SystemConfig cfg;

  SECTION("two reflected paths each at LOS power give one half") {
    const double rho = 1.0e10;
    REQUIRE(lmr(rho, {rho, rho}) == Approx(0.5).epsilon(1e-12));
  }
  SECTION("no reflected paths is the infinite sentinel") {
    REQUIRE(std::isinf(lmr(1.0e9, {})));
  }
  SECTION("matches a direct sum of reflected-path outputs") {
    const double gamma_r = 1.0 / 7.0;
    const double sigma0 = db_to_linear(-10.0);
    const double rho_los = los_pathloss(30.0, cfg);
    const double rho_1 = nlos_pathloss(38.0, gamma_r, sigma0, cfg);
    const double rho_2 = nlos_pathloss(55.0, gamma_r, sigma0, cfg);
    const double direct = (1.0 / rho_los) / (1.0 / rho_1 + 1.0 / rho_2);
    REQUIRE(lmr(rho_los, {rho_1, rho_2}) == Approx(direct).epsilon(1e-12));
  }
  SECTION("rejects nonpositive path losses") {
    REQUIRE_THROWS_AS(lmr(0.0, {1.0}), std::domain_error);
    REQUIRE_THROWS_AS(lmr(1.0, {0.0}), std::domain_error);
  }
}

TEST_CASE("observation synthesis", "[model]") {
  SystemConfig cfg = small_config();
  const PilotBook pilots = generate_pilots(cfg, 11);

  SECTION("noise-free single path matches the closed form") {
    ChannelRealization ch;
    ch.los = PathParams{cplx(0.7, -0.4), 5e-8, 0.35};
    const ObservationSet y = synthesize(cfg, pilots, ch, 0.0, 3);
    const Eigen::VectorXcd a = steering_vector(0.35, cfg);
    const double root_nbs = std::sqrt(4.0);
    for (int n = 0; n < cfg.n_subcarriers; ++n)
      for (int g = 0; g < cfg.n_transmissions; ++g) {
        const cplx expected = root_nbs * ch.los.gain *
                              delay_phasor(5e-8, n, cfg) *
                              (a.adjoint() * pilots.pilot(g, n)).value();
        REQUIRE(std::abs(y.samples(n, g) - expected) < 1e-12);
      }
  }
  SECTION("zero channel leaves pure noise of the configured variance") {
    SystemConfig big;
    big.n_bs_antennas = 2;
    big.n_subcarriers = 100;
    big.n_transmissions = 100;
    const PilotBook p = generate_pilots(big, 1);
    ChannelRealization ch;
    ch.los = PathParams{cplx(0.0, 0.0), 0.0, 0.0};
    const double sigma2 = 2.3;
    const ObservationSet y = synthesize(big, p, ch, sigma2, 17);
    const double mean_power =
        y.samples.cwiseAbs2().sum() / (100.0 * 100.0);
    REQUIRE(mean_power == Approx(sigma2).epsilon(0.05));
  }
  SECTION("same seed reproduces the observation set") {
    ChannelRealization ch;
    ch.los = PathParams{cplx(1.0, 0.2), 4e-8, -0.3};
    const ObservationSet a = synthesize(cfg, pilots, ch, 0.5, 99);
    const ObservationSet b = synthesize(cfg, pilots, ch, 0.5, 99);
    REQUIRE((a.samples - b.samples).norm() == 0.0);
  }
  SECTION("noisy realizations average to the noiseless sample") {
    ChannelRealization ch;
    ch.los = PathParams{cplx(0.9, 0.1), 6e-8, 0.2};
    const double sigma2 = 0.04;
    const ObservationSet clean = synthesize(cfg, pilots, ch, 0.0, 0);
    Eigen::MatrixXcd mean =
        Eigen::MatrixXcd::Zero(cfg.n_subcarriers, cfg.n_transmissions);
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
      mean += synthesize(cfg, pilots, ch, sigma2, 1000 + t).samples;
    mean /= static_cast<double>(trials);
    const double limit = 3.0 * std::sqrt(sigma2) / std::sqrt(double(trials));
    for (int n = 0; n < cfg.n_subcarriers; ++n)
      for (int g = 0; g < cfg.n_transmissions; ++g)
        REQUIRE(std::abs(mean(n, g) - clean.samples(n, g)) < limit);
  }
  SECTION("dimension mismatch is a configuration error") {
    SystemConfig other = cfg;
    other.n_subcarriers = 9;
    ChannelRealization ch;
    REQUIRE_THROWS_AS(synthesize(other, pilots, ch, 0.0, 1), config_error);
  }
}

TEST_CASE("geometry builders", "[model]") {
  SystemConfig cfg;  // support c*N*T_s ~ 149.9 m

  SECTION("direct path from a position") {
    const Eigen::Vector2d p(22.0, 19.0);
    const ChannelRealization ch = los_channel(cfg, p, 0.4);
    REQUIRE(ch.los.delay_s == Approx(p.norm() / speed_of_light).epsilon(1e-15));
    REQUIRE(ch.los.aod_rad == Approx(std::atan2(19.0, 22.0)).epsilon(1e-15));
    const double expected_amp =
        std::sqrt(cfg.tx_power_watts / los_pathloss(p.norm(), cfg));
    REQUIRE(std::abs(ch.los.gain) == Approx(expected_amp).epsilon(1e-12));
    REQUIRE(std::arg(ch.los.gain) == Approx(0.4).margin(1e-12));
  }
  SECTION("rejects the origin, the back half-plane and out-of-support ranges") {
    REQUIRE_THROWS_AS(los_channel(cfg, {0.0, 0.0}, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(los_channel(cfg, {-5.0, 1.0}, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(los_channel(cfg, {200.0, 0.0}, 0.0), std::domain_error);
  }
  SECTION("disc reflectors are admissible single-bounce paths") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
      ChannelRealization ch = los_channel(cfg, {25.0, 18.0}, 0.0);
      add_disc_reflectors(ch, cfg, NlosEnvironment{}, 2, 100.0, rng);
      REQUIRE(ch.nlos.size() == 2);
      for (const PathParams& p : ch.nlos) {
        REQUIRE(p.delay_s > ch.los.delay_s);
        REQUIRE(p.delay_s < cfg.max_unambiguous_delay_s());
        REQUIRE(std::abs(p.aod_rad) < pi / 2.0);
        REQUIRE(std::abs(p.gain) > 0.0);
      }
    }
  }
  SECTION("ratio-targeted reflectors hit the requested LMR exactly") {
    Rng rng(77);
    for (double target_db : {0.0, 5.0, 12.0, 20.0}) {
      ChannelRealization ch = los_channel(cfg, {23.0, 19.3}, 1.0);
      add_lmr_reflectors(ch, cfg, NlosEnvironment{}, 2, target_db, rng);
      REQUIRE(ch.nlos.size() == 2);
      const double realized_db = linear_to_db(realized_lmr(ch));
      REQUIRE(std::abs(realized_db - target_db) < 0.01);
      for (const PathParams& p : ch.nlos) {
        REQUIRE(p.delay_s > ch.los.delay_s);
        REQUIRE(p.delay_s < cfg.max_unambiguous_delay_s());
        REQUIRE(std::abs(p.aod_rad) < pi / 2.0);
      }
    }
  }
  SECTION("LOS-only channel reports the infinite ratio sentinel") {
    const ChannelRealization ch = los_channel(cfg, {30.0, 0.0}, 0.0);
    REQUIRE(std::isinf(realized_lmr(ch)));
  }
}
