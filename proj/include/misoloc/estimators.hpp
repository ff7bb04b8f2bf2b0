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

#ifndef MISOLOC_ESTIMATORS_HPP
#define MISOLOC_ESTIMATORS_HPP

#include <chrono>
#include <limits>
#include <utility>

#include "misoloc/model.hpp"

namespace misoloc {

/// Evaluation axes of the grid searches. Both axes are strictly
/// increasing with at least two points.
struct SearchGrid {
  std::vector<double> tau_axis;
  std::vector<double> theta_axis;

  /// Regular grid: delays linearly spaced on [tau_min, tau_max] inclusive,
  /// angles at the n_theta interior points of (-pi/2, pi/2).
  static SearchGrid regular(double tau_min, double tau_max, int n_tau,
                            int n_theta) {
    if (n_tau < 2 || n_theta < 2)
      throw config_error("search grid needs at least 2 points per axis");
    if (!(tau_max > tau_min))
      throw config_error("search grid: tau_max must exceed tau_min");
    SearchGrid g;
    g.tau_axis.resize(n_tau);
    for (int i = 0; i < n_tau; ++i)
      g.tau_axis[i] = tau_min + (tau_max - tau_min) * i / (n_tau - 1);
    g.theta_axis.resize(n_theta);
    for (int i = 0; i < n_theta; ++i)
      g.theta_axis[i] = -0.5 * pi + pi * (i + 1) / (n_theta + 1);
    return g;
  }

  /// Grid covering ranges up to d_max meters with `points` nodes per axis.
  static SearchGrid for_range(double d_max_m, int points) {
    return regular(0.0, d_max_m / speed_of_light, points, points);
  }

  void validate() const {
    auto increasing = [](const std::vector<double>& v) {
      for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
      return true;
    };
    if (tau_axis.size() < 2 || theta_axis.size() < 2 ||
        !increasing(tau_axis) || !increasing(theta_axis))
      throw config_error(
          "search grid axes must be strictly increasing with >= 2 points");
  }
};

enum class Method { ml2d, uml, mm };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::ml2d: return "ml2d";
    case Method::uml: return "uml";
    case Method::mm: return "mm";
  }
  return "?";
}

inline Method method_from_name(const std::string& name) {
  if (name == "ml2d") return Method::ml2d;
  if (name == "uml") return Method::uml;
  if (name == "mm") return Method::mm;
  throw config_error("unknown estimator '" + name +
                     "' (expected ml2d, uml or mm)");
}

/// Output of one estimation pipeline.
struct EstimateRecord {
  double tau_hat = 0.0;
  double theta_hat = 0.0;
  cplx alpha_hat{0.0, 0.0};
  double d_hat = 0.0;  ///< c * tau_hat
  Eigen::Vector2d p_hat{0.0, 0.0};
  Method method = Method::ml2d;
  int lags = 0;  ///< method-of-moments lag count; 0 otherwise
  double wall_time_s = 0.0;
};

/// Reciprocal-condition floor below which a subcarrier's pilot matrix is
/// considered too ill-conditioned to equalize. At G = N_BS the random
/// pilot grams have a heavy small-eigenvalue tail (typical reciprocal
/// condition ~2e-3, worst draws orders below); equalizing through such a
/// gram multiplies the noise by its inverse spectrum and a single bad
/// subcarrier can dominate every autocorrelation lag. The floor sits an
/// order of magnitude below the square-case typical value, so it removes
/// only the tail, and it depends on the known pilots only, never on the
/// received data.
inline constexpr double mm_default_condition_floor = 3e-4;

struct EstimatorOptions {
  /// Golden-section per-axis refinement after the coarse grid argmin.
  /// Off by default: the reference pipelines are pure grid searches.
  bool refine = false;
  int mm_lags = 1;
  /// A-priori subcarrier gate of the moment estimator; 0 disables.
  double mm_condition_floor = mm_default_condition_floor;
};

/// Maps range and departure angle to Cartesian position.
inline Eigen::Vector2d position_from(double d_hat, double theta_hat) {
  if (d_hat < 0.0)
    throw std::domain_error("position_from: range must be nonnegative");
  return {d_hat * std::cos(theta_hat), d_hat * std::sin(theta_hat)};
}

/// All N delay rotations of one probe delay as a vector.
inline Eigen::VectorXcd delay_phasors(double tau, const SystemConfig& config) {
  Eigen::VectorXcd p(config.n_subcarriers);
  for (int n = 0; n < config.n_subcarriers; ++n)
    p(n) = delay_phasor(tau, n, config);
  return p;
}

namespace detail {

/// V(n, g) = a^H(theta) s^g[n]; the tau-independent part of the model.
inline Eigen::MatrixXcd steering_pilot_products(const PilotBook& pilots,
                                                double theta,
                                                const SystemConfig& config) {
  const Eigen::VectorXcd a = steering_vector(theta, config);
  const int n_sub = pilots.n_subcarriers();
  const int n_tx = pilots.n_transmissions();
  Eigen::MatrixXcd v(n_sub, n_tx);
  for (int g = 0; g < n_tx; ++g)
    v.col(g) = pilots.transmissions[g] * a.conjugate();
  return v;
}

/// Closed-form gain given the products V and the delay rotations:
/// sqrt(N_BS) * alpha_hat = sum conj(w) y / sum |w|^2 with
/// w(n, g) = phases(n) * V(n, g).
inline cplx scaled_gain_given_products(const Eigen::MatrixXcd& y,
                                       const Eigen::MatrixXcd& v,
                                       const Eigen::VectorXcd& phases) {
  const int n_sub = static_cast<int>(y.rows());
  const int n_tx = static_cast<int>(y.cols());
  cplx num{0.0, 0.0};
  double denom = 0.0;
  for (int g = 0; g < n_tx; ++g) {
    for (int n = 0; n < n_sub; ++n) {
      const cplx w = phases(n) * v(n, g);
      num += std::conj(w) * y(n, g);
      denom += std::norm(w);
    }
  }
  if (denom < std::numeric_limits<double>::min())
    throw degenerate_input_error(
        "estimator: pilot-steering products carry no energy "
        "(all-zero pilots?)");
  return num / denom;
}

/// Residual sum of squares after plugging the closed-form gain back in.
inline double nll_given_products(const Eigen::MatrixXcd& y,
                                 const Eigen::MatrixXcd& v,
                                 const Eigen::VectorXcd& phases) {
  const cplx scaled_gain = scaled_gain_given_products(y, v, phases);
  const int n_sub = static_cast<int>(y.rows());
  const int n_tx = static_cast<int>(y.cols());
  double rss = 0.0;
  for (int g = 0; g < n_tx; ++g)
    for (int n = 0; n < n_sub; ++n)
      rss += std::norm(y(n, g) - scaled_gain * phases(n) * v(n, g));
  return rss;
}

/// Golden-section minimizer on [lo, hi] for a unimodal bracket.
template <class F>
double golden_section_min(F f, double lo, double hi, int iterations = 60) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

/// Bracket [axis[i-1], axis[i+1]] clipped at the ends.
inline std::pair<double, double> refine_bracket(const std::vector<double>& axis,
                                                std::size_t i) {
  const double lo = i > 0 ? axis[i - 1] : axis[i];
  const double hi = i + 1 < axis.size() ? axis[i + 1] : axis[i];
  return {lo, hi};
}

/// Hermitian positive-definite solver with a reciprocal-condition gate.
/// Solves through the eigendecomposition, so near-singular systems are
/// rejected instead of silently amplifying noise.
class HermitianSolver {
 public:
  HermitianSolver(const Eigen::MatrixXcd& m, const char* context) {
    eig_.compute(m);
    if (eig_.info() != Eigen::Success)
      throw rank_deficiency_error(std::string(context) +
                                  ": eigendecomposition failed");
    const auto& ev = eig_.eigenvalues();
    const double lambda_max = ev(ev.size() - 1);
    const double lambda_min = ev(0);
    rcond_ = lambda_max > 0.0 ? lambda_min / lambda_max : 0.0;
    if (rcond_ < 1e-12) {
      std::ostringstream err;
      err << context << ": matrix numerically singular (rcond=" << rcond_
          << ")";
      throw rank_deficiency_error(err.str());
    }
  }

  double rcond() const { return rcond_; }

  template <class Rhs>
  Eigen::MatrixXcd solve(const Rhs& rhs) const {
    const auto& v = eig_.eigenvectors();
    return v * eig_.eigenvalues().cwiseInverse().asDiagonal() *
           (v.adjoint() * rhs);
  }

 private:
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig_;
  double rcond_ = 0.0;
};

}  // namespace detail

/// Closed-form complex gain at the probe point (theta, tau):
///   (1/sqrt(N_BS)) * sum_g (w^g)^H y^g / sum_g ||w^g||^2,
/// where w^g stacks delay_phasor(tau, n) * a^H(theta) s^g[n] over n.
inline cplx alpha_hat(const ObservationSet& y, const PilotBook& pilots,
                      double theta, double tau, const SystemConfig& config) {
  pilots.check_dimensions(config);
  const Eigen::MatrixXcd v =
      detail::steering_pilot_products(pilots, theta, config);
  return detail::scaled_gain_given_products(y.samples, v,
                                            delay_phasors(tau, config)) /
         std::sqrt(static_cast<double>(config.n_bs_antennas));
}

/// Negative log-likelihood compressed over the gain (and, implicitly, the
/// noise variance): sum_g ||y^g - alpha_hat * sqrt(N_BS) * w^g(theta, tau)||^2.
inline double compressed_nll(const ObservationSet& y, const PilotBook& pilots,
                             double theta, double tau,
                             const SystemConfig& config) {
  pilots.check_dimensions(config);
  const Eigen::MatrixXcd v =
      detail::steering_pilot_products(pilots, theta, config);
  return detail::nll_given_products(y.samples, v, delay_phasors(tau, config));
}

/// Joint 2D maximum-likelihood estimate: the grid pair minimizing the
/// compressed negative log-likelihood. Ties break toward the smaller
/// delay, then the smaller angle, independent of evaluation order.
inline EstimateRecord ml2d(const ObservationSet& y, const PilotBook& pilots,
                           const SearchGrid& grid, const SystemConfig& config,
                           const EstimatorOptions& options = {}) {
  pilots.check_dimensions(config);
  grid.validate();

  std::vector<Eigen::VectorXcd> phase_table;
  phase_table.reserve(grid.tau_axis.size());
  for (double tau : grid.tau_axis)
    phase_table.push_back(delay_phasors(tau, config));

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_t = 0, best_a = 0;
  for (std::size_t a = 0; a < grid.theta_axis.size(); ++a) {
    const Eigen::MatrixXcd v = detail::steering_pilot_products(
        pilots, grid.theta_axis[a], config);
    for (std::size_t t = 0; t < grid.tau_axis.size(); ++t) {
      const double nll =
          detail::nll_given_products(y.samples, v, phase_table[t]);
      if (nll < best ||
          (nll == best && std::pair(t, a) < std::pair(best_t, best_a))) {
        best = nll;
        best_t = t;
        best_a = a;
      }
    }
  }

  EstimateRecord rec;
  rec.method = Method::ml2d;
  rec.tau_hat = grid.tau_axis[best_t];
  rec.theta_hat = grid.theta_axis[best_a];
  if (options.refine) {
    const auto [tlo, thi] = detail::refine_bracket(grid.tau_axis, best_t);
    rec.tau_hat = detail::golden_section_min(
        [&](double tau) {
          return compressed_nll(y, pilots, rec.theta_hat, tau, config);
        },
        tlo, thi);
    const auto [alo, ahi] = detail::refine_bracket(grid.theta_axis, best_a);
    rec.theta_hat = detail::golden_section_min(
        [&](double theta) {
          return compressed_nll(y, pilots, theta, rec.tau_hat, config);
        },
        alo, ahi);
  }
  rec.alpha_hat = alpha_hat(y, pilots, rec.theta_hat, rec.tau_hat, config);
  rec.d_hat = speed_of_light * rec.tau_hat;
  rec.p_hat = position_from(rec.d_hat, rec.theta_hat);
  return rec;
}

namespace detail {

/// Factorization of Xbar_G = sum_g (Xbar^g)^H Xbar^g, shared by all probe
/// delays of one unstructured search.
inline HermitianSolver uml_normal_matrix(const PilotBook& pilots,
                                         const SystemConfig& config) {
  if (config.n_subcarriers < config.n_bs_antennas) {
    std::ostringstream err;
    err << "unstructured estimator requires N >= N_BS (got N="
        << config.n_subcarriers << ", N_BS=" << config.n_bs_antennas << ")";
    throw rank_deficiency_error(err.str());
  }
  Eigen::MatrixXcd xg = Eigen::MatrixXcd::Zero(config.n_bs_antennas,
                                               config.n_bs_antennas);
  for (const auto& xbar : pilots.transmissions)
    xg += xbar.adjoint() * xbar;
  return HermitianSolver(xg, "unstructured estimator normal matrix");
}

inline Eigen::VectorXcd uml_bhat_given(const HermitianSolver& solver,
                                       const Eigen::MatrixXcd& y,
                                       const PilotBook& pilots,
                                       const Eigen::VectorXcd& phases) {
  const int n_sub = static_cast<int>(y.rows());
  const int n_tx = static_cast<int>(y.cols());
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(pilots.n_antennas());
  Eigen::VectorXcd rotated(n_sub);
  for (int g = 0; g < n_tx; ++g) {
    for (int n = 0; n < n_sub; ++n)
      rotated(n) = std::conj(phases(n)) * y(n, g);
    rhs += pilots.transmissions[g].adjoint() * rotated;
  }
  return solver.solve(rhs);
}

inline double uml_rss_given(const Eigen::VectorXcd& bhat,
                            const Eigen::MatrixXcd& y,
                            const PilotBook& pilots,
                            const Eigen::VectorXcd& phases) {
  const int n_sub = static_cast<int>(y.rows());
  const int n_tx = static_cast<int>(y.cols());
  double rss = 0.0;
  for (int g = 0; g < n_tx; ++g) {
    const Eigen::VectorXcd model = pilots.transmissions[g] * bhat;
    for (int n = 0; n < n_sub; ++n)
      rss += std::norm(y(n, g) - phases(n) * model(n));
  }
  return rss;
}

}  // namespace detail

/// Closed-form unstructured steering solution at probe delay tau:
///   b_hat(tau) = Xbar_G^{-1} sum_g (Xbar^g)^H D^H(tau) y^g.
/// Requires N >= N_BS and a well-conditioned Xbar_G.
inline Eigen::VectorXcd uml_bhat(const ObservationSet& y,
                                 const PilotBook& pilots, double tau,
                                 const SystemConfig& config) {
  pilots.check_dimensions(config);
  const auto solver = detail::uml_normal_matrix(pilots, config);
  return detail::uml_bhat_given(solver, y.samples, pilots,
                                delay_phasors(tau, config));
}

/// Unstructured ML delay estimate: the tau node minimizing
/// sum_g ||y^g - D(tau) Xbar^g b_hat(tau)||^2, ties toward the smaller tau.
inline double uml_tof(const ObservationSet& y, const PilotBook& pilots,
                      const std::vector<double>& tau_axis,
                      const SystemConfig& config,
                      const EstimatorOptions& options = {}) {
  pilots.check_dimensions(config);
  if (tau_axis.size() < 2)
    throw config_error("uml_tof: tau axis needs >= 2 points");
  const auto solver = detail::uml_normal_matrix(pilots, config);

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_t = 0;
  for (std::size_t t = 0; t < tau_axis.size(); ++t) {
    const Eigen::VectorXcd phases = delay_phasors(tau_axis[t], config);
    const Eigen::VectorXcd bhat =
        detail::uml_bhat_given(solver, y.samples, pilots, phases);
    const double rss =
        detail::uml_rss_given(bhat, y.samples, pilots, phases);
    if (rss < best) {
      best = rss;
      best_t = t;
    }
  }
  if (!options.refine) return tau_axis[best_t];

  const auto [lo, hi] = detail::refine_bracket(tau_axis, best_t);
  return detail::golden_section_min(
      [&](double tau) {
        const Eigen::VectorXcd phases = delay_phasors(tau, config);
        const Eigen::VectorXcd bhat =
            detail::uml_bhat_given(solver, y.samples, pilots, phases);
        return detail::uml_rss_given(bhat, y.samples, pilots, phases);
      },
      lo, hi);
}

/// Pilot-equalized observations: rows[i] holds the entries of
/// y^T[i] X_i^+ (the Moore-Penrose right pseudo-inverse applied per
/// subcarrier), noise_shaping[i] = (X_i^+)^H X_i^+ describes the
/// correlation the equalization induces on the transformed noise, and
/// gram_rcond[i] is the reciprocal condition number of X_i X_i^H. The
/// shaping matrices are exposed for analysis; the moment-based delay
/// estimator below does not weight by them.
struct MmTransform {
  std::vector<Eigen::VectorXcd> rows;
  std::vector<Eigen::MatrixXcd> noise_shaping;
  std::vector<double> gram_rcond;
};

inline MmTransform mm_transform(const ObservationSet& y,
                                const PilotBook& pilots,
                                const SystemConfig& config) {
  pilots.check_dimensions(config);
  const int n_sub = config.n_subcarriers;
  const int n_tx = config.n_transmissions;
  const int n_bs = config.n_bs_antennas;
  if (n_tx < n_bs) {
    std::ostringstream err;
    err << "moment estimator requires G >= N_BS (got G=" << n_tx
        << ", N_BS=" << n_bs << ")";
    throw rank_deficiency_error(err.str());
  }

  MmTransform out;
  out.rows.reserve(n_sub);
  out.noise_shaping.reserve(n_sub);
  out.gram_rcond.reserve(n_sub);
  Eigen::MatrixXcd x(n_bs, n_tx);
  for (int i = 0; i < n_sub; ++i) {
    for (int g = 0; g < n_tx; ++g) x.col(g) = pilots.pilot(g, i);
    Eigen::MatrixXcd gram = x * x.adjoint();
    std::ostringstream context;
    context << "pilot matrix on subcarrier " << i;
    const detail::HermitianSolver solver(gram, context.str().c_str());
    // X^+ = X^H gram^{-1} = (gram^{-1} X)^H since gram is Hermitian.
    const Eigen::MatrixXcd pinv = solver.solve(x).adjoint();
    out.rows.push_back((y.samples.row(i) * pinv).transpose());
    out.noise_shaping.push_back(pinv.adjoint() * pinv);
    out.gram_rcond.push_back(solver.rcond());
  }
  return out;
}

/// Moment-based closed-form delay estimate from lagged sample
/// autocorrelations of the pilot-equalized observations:
///   tau_hat = N*T_s / (2*pi*q(L)) * sum_l l * arg{ sum_i r_i^T r*_{i+l} },
/// q(L) = L(L+1)(2L+1)/6.
///
/// Branch handling: the lag-1 argument is mapped to [0, 2*pi) — delays are
/// nonnegative and only defined modulo N*T_s — and each higher-lag
/// argument is unwrapped to the branch nearest l times the lag-1 argument
/// before weighting.
///
/// Subcarriers whose pilot gram falls below condition_floor are excluded
/// from the averages a priori (see mm_default_condition_floor); pass 0 to
/// disable the gate. Exclusion keeps the retained terms exact, so the
/// noiseless estimate is unaffected.
inline double mm_tof(const ObservationSet& y, const PilotBook& pilots, int lags,
                     const SystemConfig& config,
                     double condition_floor = mm_default_condition_floor) {
  const int n_sub = config.n_subcarriers;
  if (lags < 1 || lags >= n_sub)
    throw config_error("mm_tof: lag count must satisfy 1 <= L < N");
  const MmTransform t = mm_transform(y, pilots, config);

  std::vector<bool> usable(n_sub);
  for (int i = 0; i < n_sub; ++i)
    usable[i] = t.gram_rcond[i] >= condition_floor;

  double weighted_args = 0.0;
  double q = 0.0;
  double lag1_arg = 0.0;
  for (int l = 1; l <= lags; ++l) {
    cplx acc{0.0, 0.0};
    int terms = 0;
    for (int i = 0; i + l < n_sub; ++i) {
      if (!usable[i] || !usable[i + l]) continue;
      acc += t.rows[i + l].dot(t.rows[i]);  // sum_k r_i(k) * conj(r_{i+l}(k))
      ++terms;
    }
    if (terms == 0) {
      std::ostringstream err;
      err << "mm_tof: no usable subcarrier pair at lag " << l
          << " (pilot grams below the conditioning floor "
          << condition_floor << ")";
      throw rank_deficiency_error(err.str());
    }
    double arg = std::arg(acc);
    if (l == 1) {
      if (arg < 0.0) arg += 2.0 * pi;
      lag1_arg = arg;
    } else {
      arg += 2.0 * pi * std::round((l * lag1_arg - arg) / (2.0 * pi));
    }
    weighted_args += l * arg;
    q += static_cast<double>(l) * l;
  }
  return config.max_unambiguous_delay_s() * weighted_args / (2.0 * pi * q);
}

/// Angle estimate with the delay pinned: the theta node minimizing the
/// compressed negative log-likelihood at tau_fixed. Shared second stage of
/// the unstructured and moment pipelines. Ties toward the smaller angle.
inline double aod_given_tof(const ObservationSet& y, const PilotBook& pilots,
                            double tau_fixed,
                            const std::vector<double>& theta_axis,
                            const SystemConfig& config,
                            const EstimatorOptions& options = {}) {
  pilots.check_dimensions(config);
  if (theta_axis.size() < 2)
    throw config_error("aod_given_tof: theta axis needs >= 2 points");

  const Eigen::VectorXcd phases = delay_phasors(tau_fixed, config);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_a = 0;
  for (std::size_t a = 0; a < theta_axis.size(); ++a) {
    const Eigen::MatrixXcd v =
        detail::steering_pilot_products(pilots, theta_axis[a], config);
    const double nll = detail::nll_given_products(y.samples, v, phases);
    if (nll < best) {
      best = nll;
      best_a = a;
    }
  }
  if (!options.refine) return theta_axis[best_a];

  const auto [lo, hi] = detail::refine_bracket(theta_axis, best_a);
  return detail::golden_section_min(
      [&](double theta) {
        return compressed_nll(y, pilots, theta, tau_fixed, config);
      },
      lo, hi);
}

/// True when the method's structural preconditions hold for this config.
inline bool is_applicable(Method method, const SystemConfig& config) {
  switch (method) {
    case Method::mm:
      return config.n_transmissions >= config.n_bs_antennas;
    case Method::uml:
      return config.n_subcarriers >= config.n_bs_antennas;
    case Method::ml2d:
      return true;
  }
  return false;
}

/// Runs the full pipeline of one method and times it (monotonic clock
/// around the estimation only).
inline EstimateRecord estimate(Method method, const ObservationSet& y,
                               const PilotBook& pilots, const SearchGrid& grid,
                               const SystemConfig& config,
                               const EstimatorOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  EstimateRecord rec;
  switch (method) {
    case Method::ml2d:
      rec = ml2d(y, pilots, grid, config, options);
      break;
    case Method::uml: {
      rec.method = Method::uml;
      rec.tau_hat = uml_tof(y, pilots, grid.tau_axis, config, options);
      rec.theta_hat = aod_given_tof(y, pilots, rec.tau_hat, grid.theta_axis,
                                    config, options);
      break;
    }
    case Method::mm: {
      rec.method = Method::mm;
      rec.lags = options.mm_lags;
      rec.tau_hat = mm_tof(y, pilots, options.mm_lags, config,
                           options.mm_condition_floor);
      rec.theta_hat = aod_given_tof(y, pilots, rec.tau_hat, grid.theta_axis,
                                    config, options);
      break;
    }
  }
  if (method != Method::ml2d) {
    rec.alpha_hat = alpha_hat(y, pilots, rec.theta_hat, rec.tau_hat, config);
    rec.d_hat = speed_of_light * rec.tau_hat;
    rec.p_hat = position_from(rec.d_hat, rec.theta_hat);
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

}  // namespace misoloc

#endif  // MISOLOC_ESTIMATORS_HPP
