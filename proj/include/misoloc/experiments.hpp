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

#ifndef MISOLOC_EXPERIMENTS_HPP
#define MISOLOC_EXPERIMENTS_HPP

#include <atomic>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "misoloc/bounds.hpp"
#include "misoloc/estimators.hpp"
#include "misoloc/scenario.hpp"

namespace misoloc {

enum class Axis { transmissions, snr_db, lmr_db, grid_points };

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::transmissions: return "G";
    case Axis::snr_db: return "snr";
    case Axis::lmr_db: return "lmr";
    case Axis::grid_points: return "grid";
  }
  return "?";
}

inline Axis axis_from_name(const std::string& name) {
  if (name == "G" || name == "g" || name == "transmissions")
    return Axis::transmissions;
  if (name == "snr" || name == "snr_db" || name == "SNR") return Axis::snr_db;
  if (name == "lmr" || name == "lmr_db" || name == "LMR") return Axis::lmr_db;
  if (name == "grid" || name == "grid_points" || name == "P")
    return Axis::grid_points;
  throw config_error("unknown sweep axis '" + name +
                     "' (expected G, snr, lmr or grid)");
}

/// One Monte Carlo sweep: a base scenario, the axis to vary with its
/// values, the estimators to run (empty = bounds only), trials and seed.
struct SweepSpec {
  Scenario scenario;
  Axis axis = Axis::transmissions;
  std::vector<double> values;
  std::vector<Method> estimators;
  int n_trials = 200;
  std::uint64_t master_seed = 1;
};

/// Aggregated output of one (axis value, estimator) cell.
struct CellResult {
  bool applicable = true;
  std::string error;  ///< non-empty when the cell failed and was marked
  double rmse_d_m = 0.0;
  double rmse_theta_rad = 0.0;
  double rmse_pos_m = 0.0;
  double se_d_m = 0.0;  ///< jackknife standard errors of the RMSEs
  double se_theta_rad = 0.0;
  double se_pos_m = 0.0;
  double crlb_d_m = 0.0;  ///< root-CRLBs / PEB averaged over the trials
  double crlb_theta_rad = 0.0;
  double peb_m = 0.0;
  double mean_runtime_s = 0.0;
  int n_trials = 0;
  std::uint64_t seed = 0;
};

struct ResultRow {
  double axis_value = 0.0;
  std::string estimator;  ///< "ml2d", "uml", "mm", or "bounds"
  CellResult cell;
};

namespace detail {

/// Root-mean-square accumulator with a delete-one jackknife standard
/// error, so sweep monotonicity claims come with confidence bands.
class RmseAccumulator {
 public:
  void add(double err) { sq_.push_back(err * err); }

  double rmse() const {
    if (sq_.empty()) return 0.0;
    double s = 0.0;
    for (double v : sq_) s += v;
    return std::sqrt(s / static_cast<double>(sq_.size()));
  }

  double jackknife_se() const {
    const std::size_t n = sq_.size();
    if (n < 2) return 0.0;
    double s = 0.0;
    for (double v : sq_) s += v;
    std::vector<double> loo(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      loo[i] = std::sqrt(std::max(0.0, (s - sq_[i]) / (n - 1.0)));
      mean += loo[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : loo) var += (v - mean) * (v - mean);
    return std::sqrt(var * (n - 1.0) / n);
  }

 private:
  std::vector<double> sq_;
};

inline double wrap_angle_error(double e) {
  while (e > pi) e -= 2.0 * pi;
  while (e < -pi) e += 2.0 * pi;
  return e;
}

}  // namespace detail

/// Scenario-level context shared by every trial of a cell.
struct TrialContext {
  SystemConfig config;
  SearchGrid grid;
  Eigen::Vector2d position;
  double rho_los = 0.0;
  double sigma2 = 0.0;
};

inline TrialContext make_context(const Scenario& sc) {
  sc.validate();
  TrialContext ctx;
  ctx.config = sc.system;
  ctx.grid = SearchGrid::for_range(sc.estimation.d_max_m,
                                   sc.estimation.grid_points);
  ctx.position = sc.geometry.position();
  ctx.rho_los = los_pathloss(ctx.position.norm(), ctx.config);
  ctx.sigma2 = sc.snr_db_target
                   ? noise_variance_for_snr(ctx.config, ctx.rho_los,
                                            *sc.snr_db_target)
                   : thermal_noise_power(ctx.config);
  return ctx;
}

/// One trial's inputs. Per trial the gain phases, reflector placement,
/// noise, and (unless frozen) the pilot book are redrawn from sub-seeds of
/// trial_seed(cell_seed, t), so any trial regenerates independently of the
/// others and of which estimator consumes it.
struct TrialRealization {
  PilotBook pilots;
  ChannelRealization channel;
  ObservationSet obs;
};

inline TrialRealization make_trial(const Scenario& sc, const TrialContext& ctx,
                                   std::uint64_t cell_seed, int t,
                                   const PilotBook* frozen_pilots = nullptr) {
  const std::uint64_t ts = trial_seed(cell_seed, t);
  TrialRealization trial;
  trial.pilots = frozen_pilots
                     ? *frozen_pilots
                     : generate_pilots(ctx.config,
                                       derive_seed(ts, seed_stream::pilots));

  Rng channel_rng(derive_seed(ts, seed_stream::channel));
  const double phase = sc.geometry.gain_phase_rad
                           ? *sc.geometry.gain_phase_rad
                           : channel_rng.uniform(0.0, 2.0 * pi);
  trial.channel = los_channel(ctx.config, ctx.position, phase);
  if (sc.geometry.n_nlos_paths > 0) {
    Rng geo_rng(derive_seed(ts, seed_stream::geometry));
    const NlosEnvironment env = sc.geometry.environment();
    if (sc.geometry.lmr_db)
      add_lmr_reflectors(trial.channel, ctx.config, env,
                         sc.geometry.n_nlos_paths, *sc.geometry.lmr_db,
                         geo_rng);
    else
      add_disc_reflectors(trial.channel, ctx.config, env,
                          sc.geometry.n_nlos_paths, sc.estimation.d_max_m,
                          geo_rng);
  }
  trial.obs = synthesize(ctx.config, trial.pilots, trial.channel, ctx.sigma2,
                         derive_seed(ts, seed_stream::noise));
  return trial;
}

/// Runs one Monte Carlo cell: n_trials draws, per-trial estimation (when an
/// estimator is given) and per-trial bounds, aggregated into RMSEs with
/// jackknife standard errors. The estimator never sees the channel draw.
/// An inapplicable estimator yields a marked cell, not an error.
inline CellResult run_cell(const Scenario& sc, std::optional<Method> method,
                           int n_trials, std::uint64_t cell_seed) {
  if (n_trials < 1) throw config_error("run_cell: n_trials must be >= 1");
  const TrialContext ctx = make_context(sc);
  CellResult out;
  out.seed = cell_seed;
  if (method && !is_applicable(*method, ctx.config)) {
    out.applicable = false;
    return out;
  }

  std::optional<PilotBook> frozen;
  if (sc.freeze_pilots)
    frozen = generate_pilots(ctx.config,
                             derive_seed(cell_seed, seed_stream::pilots));

  EstimatorOptions options;
  options.refine = sc.estimation.refine;
  options.mm_lags = sc.estimation.mm_lags;

  const double d_true = ctx.position.norm();
  const double theta_true = std::atan2(ctx.position.y(), ctx.position.x());

  detail::RmseAccumulator acc_d, acc_theta, acc_pos;
  double crlb_d_sum = 0.0, crlb_theta_sum = 0.0, peb_sum = 0.0;
  int bound_trials = 0;
  double runtime_sum = 0.0;

  for (int t = 0; t < n_trials; ++t) {
    const TrialRealization trial =
        make_trial(sc, ctx, cell_seed, t, frozen ? &*frozen : nullptr);

    if (ctx.sigma2 > 0.0) {
      const BoundRecord bounds = compute_bounds(
          ctx.config, trial.pilots,
          ChannelParamVector::from_path(trial.channel.los), ctx.position,
          ctx.sigma2);
      if (!bounds.singular) {
        crlb_d_sum += bounds.crlb_d;
        crlb_theta_sum += bounds.crlb_theta;
        peb_sum += bounds.peb_m;
        ++bound_trials;
      }
    } else {
      // Noise-free data carries unbounded information; report zero bounds.
      ++bound_trials;
    }

    if (method) {
      const EstimateRecord rec =
          estimate(*method, trial.obs, trial.pilots, ctx.grid, ctx.config,
                   options);
      acc_d.add(rec.d_hat - d_true);
      acc_theta.add(detail::wrap_angle_error(rec.theta_hat - theta_true));
      acc_pos.add((rec.p_hat - ctx.position).norm());
      runtime_sum += rec.wall_time_s;
    }
  }

  out.n_trials = n_trials;
  if (method) {
    out.rmse_d_m = acc_d.rmse();
    out.rmse_theta_rad = acc_theta.rmse();
    out.rmse_pos_m = acc_pos.rmse();
    out.se_d_m = acc_d.jackknife_se();
    out.se_theta_rad = acc_theta.jackknife_se();
    out.se_pos_m = acc_pos.jackknife_se();
    out.mean_runtime_s = runtime_sum / n_trials;
  }
  if (bound_trials > 0) {
    out.crlb_d_m = crlb_d_sum / bound_trials;
    out.crlb_theta_rad = crlb_theta_sum / bound_trials;
    out.peb_m = peb_sum / bound_trials;
  }
  return out;
}

/// Base scenario with one axis value applied.
inline Scenario apply_axis(const Scenario& base, Axis axis, double value) {
  Scenario sc = base;
  switch (axis) {
    case Axis::transmissions: {
      const int g = static_cast<int>(value);
      if (static_cast<double>(g) != value || g < 1)
        throw config_error("sweep axis G requires integer values >= 1");
      sc.system.n_transmissions = g;
      break;
    }
    case Axis::snr_db:
      sc.snr_db_target = value;
      break;
    case Axis::lmr_db:
      sc.geometry.lmr_db = value;
      if (sc.geometry.n_nlos_paths < 1) sc.geometry.n_nlos_paths = 2;
      break;
    case Axis::grid_points: {
      const int p = static_cast<int>(value);
      if (static_cast<double>(p) != value || p < 2)
        throw config_error("sweep axis grid requires integer values >= 2");
      sc.estimation.grid_points = p;
      break;
    }
  }
  return sc;
}

/// Result table of a sweep; serializes to the fixed CSV schema and a JSON
/// summary carrying the spec hash, seeds and standard errors.
struct ResultTable {
  std::vector<ResultRow> rows;

  static constexpr const char* csv_header =
      "axis_value,estimator,rmse_d_m,rmse_theta_rad,rmse_pos_m,crlb_d_m,"
      "crlb_theta_rad,peb_m,mean_runtime_s,n_trials,seed";

  void write_csv(std::ostream& os) const {
    os << csv_header << '\n';
    os << std::setprecision(17);
    for (const ResultRow& r : rows) {
      os << r.axis_value << ',' << r.estimator << ',';
      const bool has_estimates =
          r.cell.applicable && r.cell.error.empty() && r.estimator != "bounds";
      if (has_estimates)
        os << r.cell.rmse_d_m << ',' << r.cell.rmse_theta_rad << ','
           << r.cell.rmse_pos_m << ',';
      else
        os << ",,,";
      if (r.cell.applicable && r.cell.error.empty())
        os << r.cell.crlb_d_m << ',' << r.cell.crlb_theta_rad << ','
           << r.cell.peb_m << ',';
      else
        os << ",,,";
      if (has_estimates)
        os << r.cell.mean_runtime_s;
      os << ',' << r.cell.n_trials << ',' << r.cell.seed << '\n';
    }
  }
};

/// 64-bit FNV-1a, used for the sweep-spec hash in JSON summaries.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string canonical_spec_string(const SweepSpec& spec) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << scenario_json(spec.scenario).dump() << '|' << axis_name(spec.axis)
     << '|';
  for (double v : spec.values) os << v << ',';
  os << '|';
  for (Method m : spec.estimators) os << method_name(m) << ',';
  os << '|' << spec.n_trials << '|' << spec.master_seed;
  return os.str();
}

inline std::uint64_t spec_hash(const SweepSpec& spec) {
  return fnv1a64(canonical_spec_string(spec));
}

inline nlohmann::json summary_json(const SweepSpec& spec,
                                   const ResultTable& table) {
  nlohmann::json j;
  j["version"] = version();
  j["spec_hash"] = spec_hash(spec);
  j["master_seed"] = spec.master_seed;
  j["axis"] = axis_name(spec.axis);
  j["values"] = spec.values;
  std::vector<std::string> est;
  for (Method m : spec.estimators) est.emplace_back(method_name(m));
  j["estimators"] = est;
  j["n_trials"] = spec.n_trials;
  j["scenario"] = scenario_json(spec.scenario);
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& r : table.rows) {
    nlohmann::json row;
    row["axis_value"] = r.axis_value;
    row["estimator"] = r.estimator;
    row["applicable"] = r.cell.applicable;
    if (!r.cell.error.empty()) row["error"] = r.cell.error;
    row["rmse_d_m"] = r.cell.rmse_d_m;
    row["rmse_theta_rad"] = r.cell.rmse_theta_rad;
    row["rmse_pos_m"] = r.cell.rmse_pos_m;
    row["se_d_m"] = r.cell.se_d_m;
    row["se_theta_rad"] = r.cell.se_theta_rad;
    row["se_pos_m"] = r.cell.se_pos_m;
    row["crlb_d_m"] = r.cell.crlb_d_m;
    row["crlb_theta_rad"] = r.cell.crlb_theta_rad;
    row["peb_m"] = r.cell.peb_m;
    row["mean_runtime_s"] = r.cell.mean_runtime_s;
    row["n_trials"] = r.cell.n_trials;
    row["seed"] = r.cell.seed;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

/// Executes the sweep: one row per (axis value x estimator), or bounds-only
/// rows when the estimator set is empty. Cells run on a worker pool; every
/// cell takes its seed from (master_seed, axis index) only, so all
/// estimators at one axis value consume identical realizations and the
/// table is reproducible regardless of scheduling. Cell failures are
/// propagated as marked rows, not exceptions.
inline ResultTable run_sweep(const SweepSpec& spec) {
  if (spec.values.empty())
    throw config_error("sweep: the axis value list is empty");
  if (spec.n_trials < 1) throw config_error("sweep: n_trials must be >= 1");
  spec.scenario.validate();

  struct Job {
    std::size_t value_index;
    std::optional<Method> method;
  };
  std::vector<Job> jobs;
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    if (spec.estimators.empty())
      jobs.push_back({vi, std::nullopt});
    else
      for (Method m : spec.estimators) jobs.push_back({vi, m});
  }

  ResultTable table;
  table.rows.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      const double value = spec.values[job.value_index];
      const std::uint64_t cell_seed =
          derive_seed(derive_seed(spec.master_seed, seed_stream::cell),
                      static_cast<std::uint64_t>(job.value_index));
      ResultRow row;
      row.axis_value = value;
      row.estimator = job.method ? method_name(*job.method) : "bounds";
      try {
        const Scenario cell_sc = apply_axis(spec.scenario, spec.axis, value);
        row.cell = run_cell(cell_sc, job.method, spec.n_trials, cell_seed);
      } catch (const std::exception& e) {
        row.cell = CellResult{};
        row.cell.applicable = false;
        row.cell.error = e.what();
        row.cell.seed = cell_seed;
      }
      table.rows[i] = std::move(row);
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers =
      std::min<std::size_t>(hw, jobs.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return table;
}

/// One line of the runtime study.
struct BenchRow {
  Method method = Method::ml2d;
  int grid_points = 0;
  double mean_runtime_s = 0.0;
  /// Relative to the moment estimator at 150 grid points (or at the
  /// largest measured grid when 150 is not among the values).
  double normalized = 0.0;
};

/// Measures mean estimator runtimes over `repeats` timed repetitions after
/// one discarded warm-up, on a single synthesized observation set per
/// configuration. Estimators execute sequentially on one thread so the
/// relative complexities are hardware comparable.
inline std::vector<BenchRow> benchmark_runtimes(
    const std::vector<int>& grid_point_values, int n_transmissions,
    const Scenario& base, int repeats) {
  if (repeats < 3)
    throw config_error("benchmark: repeats must be >= 3");
  if (grid_point_values.empty())
    throw config_error("benchmark: empty grid point list");
  Scenario sc = base;
  sc.system.n_transmissions = n_transmissions;
  sc.freeze_pilots = true;
  if (!is_applicable(Method::mm, sc.system))
    throw inapplicable_estimator_error(
        "benchmark: the moment estimator (normalization reference) needs "
        "G >= N_BS");

  const std::uint64_t bench_seed = derive_seed(sc.seed, seed_stream::bench);
  std::vector<BenchRow> rows;
  const Method methods[] = {Method::ml2d, Method::uml, Method::mm};
  for (int p : grid_point_values) {
    Scenario cell = sc;
    cell.estimation.grid_points = p;
    const TrialContext ctx = make_context(cell);
    const TrialRealization trial = make_trial(cell, ctx, bench_seed, 0);
    EstimatorOptions options;
    options.mm_lags = cell.estimation.mm_lags;
    for (Method m : methods) {
      estimate(m, trial.obs, trial.pilots, ctx.grid, ctx.config, options);
      double total = 0.0;
      for (int r = 0; r < repeats; ++r)
        total += estimate(m, trial.obs, trial.pilots, ctx.grid, ctx.config,
                          options)
                     .wall_time_s;
      rows.push_back({m, p, total / repeats, 0.0});
    }
  }

  double reference = 0.0;
  int reference_p = -1;
  for (const BenchRow& r : rows) {
    if (r.method != Method::mm) continue;
    if (r.grid_points == 150 || (reference_p != 150 &&
                                 r.grid_points > reference_p)) {
      reference = r.mean_runtime_s;
      reference_p = r.grid_points;
    }
  }
  for (BenchRow& r : rows)
    r.normalized = reference > 0.0 ? r.mean_runtime_s / reference : 0.0;
  return rows;
}

}  // namespace misoloc

#endif  // MISOLOC_EXPERIMENTS_HPP
