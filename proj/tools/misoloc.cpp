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
//
// Command-line front end. Subcommands:
//   simulate     one seeded trial, verbose estimate dump
//   sweep        Monte Carlo RMSE sweep over G / SNR / LMR / grid size
//   bounds       CRLB and PEB tables (bounds-only sweep)
//   bench        estimator runtime study
//   check-pilots pilot-design singularity diagnosis
//
// Exit codes: 0 success, 1 usage error, 2 configuration error,
// 3 rank-deficient design, 4 inapplicable estimator, 5 singular FIM /
// degenerate pilot design.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "misoloc/misoloc.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRankDeficient = 3;
constexpr int kExitInapplicable = 4;
constexpr int kExitSingular = 5;

struct CommonArgs {
  std::string scenario_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<double> snr_db;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario_path,
                  "Scenario file (key = value format)");
  cmd->add_option("--set", args.overrides,
                  "Override a scenario key, e.g. --set n_subcarriers=32 "
                  "(repeatable; flags win over the file)");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Master seed (overrides scenario)");
  cmd->add_option("--trials", args.trials,
                  "Monte Carlo trials (overrides scenario)");
  cmd->add_option("--snr", args.snr_db, "Target SNR in dB at the LOS range");
}

misoloc::Scenario resolve_scenario(const CommonArgs& args) {
  misoloc::Scenario sc;
  if (!args.scenario_path.empty())
    sc = misoloc::load_scenario_file(args.scenario_path);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw misoloc::config_error("--set expects key=value, got '" + kv + "'");
    misoloc::apply_scenario_key(sc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.seed) sc.seed = *args.seed;
  if (args.trials) sc.n_trials = *args.trials;
  if (args.snr_db) sc.snr_db_target = *args.snr_db;
  sc.validate();
  return sc;
}

std::vector<misoloc::Method> parse_estimators(const std::string& csv) {
  std::vector<misoloc::Method> out;
  std::istringstream in(csv);
  std::string token;
  while (std::getline(in, token, ','))
    if (!token.empty()) out.push_back(misoloc::method_from_name(token));
  return out;
}

/// Axis value lists: "1,2,5", "1:20" (step 1) or "0:5:20" (start:step:stop).
std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::istringstream in(spec);
    std::string token;
    while (std::getline(in, token, ':'))
      parts.push_back(misoloc::detail::parse_double("--values", token));
    double lo = parts[0], step = 1.0, hi = 0.0;
    if (parts.size() == 2) {
      hi = parts[1];
    } else if (parts.size() == 3) {
      step = parts[1];
      hi = parts[2];
    } else {
      throw misoloc::config_error("--values range must be lo:hi or lo:step:hi");
    }
    if (!(step > 0.0) || hi < lo)
      throw misoloc::config_error("--values range is empty");
    for (double v = lo; v <= hi + 1e-9 * std::abs(step); v += step)
      out.push_back(v);
    return out;
  }
  std::istringstream in(spec);
  std::string token;
  while (std::getline(in, token, ','))
    if (!token.empty())
      out.push_back(misoloc::detail::parse_double("--values", token));
  return out;
}

std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out)
    throw misoloc::config_error("cannot write '" + path.string() + "'");
  out << text;
}

nlohmann::json base_manifest(const std::string& command,
                             const misoloc::Scenario& sc) {
  nlohmann::json m;
  m["tool"] = "misoloc";
  m["version"] = misoloc::version();
  m["command"] = command;
  m["scenario"] = misoloc::scenario_json(sc);
  return m;
}

int run_simulate(const CommonArgs& common, const std::string& estimators_csv) {
  using namespace misoloc;
  const Scenario sc = resolve_scenario(common);
  std::vector<Method> methods;
  if (estimators_csv.empty()) {
    for (Method m : {Method::ml2d, Method::uml, Method::mm})
      if (is_applicable(m, sc.system)) methods.push_back(m);
  } else {
    methods = parse_estimators(estimators_csv);
    for (Method m : methods)
      if (!is_applicable(m, sc.system))
        throw inapplicable_estimator_error(
            std::string("estimator '") + method_name(m) +
            "' is not applicable to this configuration");
  }

  const TrialContext ctx = make_context(sc);
  const TrialRealization trial = make_trial(sc, ctx, sc.seed, 0);
  const double d_true = ctx.position.norm();
  const double theta_true = std::atan2(ctx.position.y(), ctx.position.x());

  std::cout << "scenario: N=" << ctx.config.n_subcarriers
            << " G=" << ctx.config.n_transmissions
            << " N_BS=" << ctx.config.n_bs_antennas
            << " sigma2=" << ctx.sigma2 << "\n";
  std::cout << "truth: d=" << d_true << " m  theta=" << theta_true * 180.0 / pi
            << " deg  p=(" << ctx.position.x() << ", " << ctx.position.y()
            << ")  nlos paths=" << trial.channel.nlos.size() << "\n";

  EstimatorOptions options;
  options.refine = sc.estimation.refine;
  options.mm_lags = sc.estimation.mm_lags;

  nlohmann::json results = nlohmann::json::array();
  for (Method m : methods) {
    const EstimateRecord rec =
        estimate(m, trial.obs, trial.pilots, ctx.grid, ctx.config, options);
    std::cout << method_name(m) << ": d_hat=" << rec.d_hat
              << " m (err " << rec.d_hat - d_true << ")  theta_hat="
              << rec.theta_hat * 180.0 / pi << " deg (err "
              << (rec.theta_hat - theta_true) * 180.0 / pi << ")  pos err="
              << (rec.p_hat - ctx.position).norm() << " m  time="
              << rec.wall_time_s << " s\n";
    nlohmann::json r;
    r["estimator"] = method_name(m);
    r["tau_hat_s"] = rec.tau_hat;
    r["theta_hat_rad"] = rec.theta_hat;
    r["d_hat_m"] = rec.d_hat;
    r["p_hat_m"] = {rec.p_hat.x(), rec.p_hat.y()};
    r["alpha_hat"] = {rec.alpha_hat.real(), rec.alpha_hat.imag()};
    r["lags"] = rec.lags;
    r["wall_time_s"] = rec.wall_time_s;
    r["pos_error_m"] = (rec.p_hat - ctx.position).norm();
    results.push_back(std::move(r));
  }

  nlohmann::json bounds_json;
  if (ctx.sigma2 > 0.0) {
    const BoundRecord b = compute_bounds(
        ctx.config, trial.pilots,
        ChannelParamVector::from_path(trial.channel.los), ctx.position,
        ctx.sigma2);
    if (!b.singular) {
      std::cout << "bounds: sqrt-CRLB d=" << b.crlb_d
                << " m  theta=" << b.crlb_theta << " rad  PEB=" << b.peb_m
                << " m\n";
      bounds_json = {{"crlb_d_m", b.crlb_d},
                     {"crlb_theta_rad", b.crlb_theta},
                     {"crlb_r", b.crlb_r},
                     {"crlb_phi_rad", b.crlb_phi},
                     {"peb_m", b.peb_m}};
    } else {
      std::cout << "bounds: singular FIM — " << b.diagnosis << "\n";
      bounds_json = {{"singular", true}, {"diagnosis", b.diagnosis}};
    }
  } else {
    std::cout << "bounds: skipped (noise-free synthesis)\n";
  }

  const auto out = ensure_out_dir(common.out_dir);
  nlohmann::json manifest = base_manifest("simulate", sc);
  manifest["estimates"] = results;
  manifest["bounds"] = bounds_json;
  manifest["truth"] = {{"d_m", d_true},
                       {"theta_rad", theta_true},
                       {"p_m", {ctx.position.x(), ctx.position.y()}}};
  write_file(out / "simulate.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << (out / "simulate.json").string() << "\n";
  return 0;
}

int run_sweep_cmd(const CommonArgs& common, const std::string& axis_name_arg,
                  const std::string& values_spec,
                  const std::string& estimators_csv) {
  using namespace misoloc;
  SweepSpec spec;
  spec.scenario = resolve_scenario(common);
  spec.axis = axis_from_name(axis_name_arg);
  spec.values = parse_values(values_spec);
  spec.estimators = parse_estimators(estimators_csv);
  spec.n_trials = spec.scenario.n_trials;
  spec.master_seed = spec.scenario.seed;

  const ResultTable table = run_sweep(spec);

  const auto out = ensure_out_dir(common.out_dir);
  const std::string stem = std::string("sweep_") + axis_name(spec.axis);
  std::ostringstream csv;
  table.write_csv(csv);
  write_file(out / (stem + ".csv"), csv.str());
  write_file(out / (stem + "_summary.json"),
             summary_json(spec, table).dump(2) + "\n");
  nlohmann::json manifest = base_manifest("sweep", spec.scenario);
  manifest["axis"] = axis_name(spec.axis);
  manifest["values"] = spec.values;
  manifest["estimators"] = estimators_csv;
  manifest["n_trials"] = spec.n_trials;
  manifest["master_seed"] = spec.master_seed;
  manifest["spec_hash"] = spec_hash(spec);
  write_file(out / (stem + "_manifest.json"), manifest.dump(2) + "\n");

  int marked = 0;
  for (const auto& r : table.rows)
    if (!r.cell.applicable || !r.cell.error.empty()) ++marked;
  std::cout << "sweep " << axis_name(spec.axis) << ": " << table.rows.size()
            << " rows (" << marked << " marked) -> "
            << (out / (stem + ".csv")).string() << "\n";
  return 0;
}

int run_bounds_cmd(const CommonArgs& common, const std::string& axis_name_arg,
                   const std::string& values_spec) {
  using namespace misoloc;
  SweepSpec spec;
  spec.scenario = resolve_scenario(common);
  spec.axis = axis_from_name(axis_name_arg);
  spec.values = values_spec.empty()
                    ? std::vector<double>{static_cast<double>(
                          spec.scenario.system.n_transmissions)}
                    : parse_values(values_spec);
  spec.n_trials = spec.scenario.n_trials;
  spec.master_seed = spec.scenario.seed;

  const ResultTable table = run_sweep(spec);
  const auto out = ensure_out_dir(common.out_dir);
  std::ostringstream csv;
  table.write_csv(csv);
  write_file(out / "bounds.csv", csv.str());
  nlohmann::json manifest = base_manifest("bounds", spec.scenario);
  manifest["axis"] = axis_name(spec.axis);
  manifest["values"] = spec.values;
  manifest["spec_hash"] = spec_hash(spec);
  write_file(out / "bounds_manifest.json", manifest.dump(2) + "\n");
  std::cout << "bounds: " << table.rows.size() << " rows -> "
            << (out / "bounds.csv").string() << "\n";
  return 0;
}

int run_bench_cmd(const CommonArgs& common, const std::string& points_spec,
                  int repeats, std::optional<int> g_override) {
  using namespace misoloc;
  const Scenario sc = resolve_scenario(common);
  std::vector<int> points;
  for (double v : parse_values(points_spec))
    points.push_back(static_cast<int>(v));
  const int g = g_override.value_or(sc.system.n_transmissions);

  const auto rows = benchmark_runtimes(points, g, sc, repeats);

  const auto out = ensure_out_dir(common.out_dir);
  std::ostringstream csv;
  csv << "estimator,grid_points,mean_runtime_s,normalized_to_mm_reference\n";
  csv << std::setprecision(17);
  for (const BenchRow& r : rows)
    csv << method_name(r.method) << ',' << r.grid_points << ','
        << r.mean_runtime_s << ',' << r.normalized << '\n';
  write_file(out / "bench.csv", csv.str());
  nlohmann::json manifest = base_manifest("bench", sc);
  manifest["grid_points"] = points;
  manifest["repeats"] = repeats;
  manifest["n_transmissions"] = g;
  write_file(out / "bench_manifest.json", manifest.dump(2) + "\n");

  for (const BenchRow& r : rows)
    std::cout << "bench " << method_name(r.method) << " P=" << r.grid_points
              << " mean=" << r.mean_runtime_s << " s  x" << r.normalized
              << " of MM reference\n";
  std::cout << "wrote " << (out / "bench.csv").string() << "\n";
  return 0;
}

int run_check_pilots(const CommonArgs& common,
                     std::optional<double> theta_deg) {
  using namespace misoloc;
  const Scenario sc = resolve_scenario(common);
  const Eigen::Vector2d p = sc.geometry.position();
  const double theta =
      theta_deg ? *theta_deg * pi / 180.0 : std::atan2(p.y(), p.x());
  const PilotBook pilots =
      generate_pilots(sc.system, derive_seed(sc.seed, seed_stream::pilots));
  const SingularityReport report =
      fim_singularity_check(pilots, theta, sc.system);
  std::cout << "pilot design at theta=" << theta * 180.0 / pi
            << " deg: " << (report.singular ? "SINGULAR" : "non-singular")
            << "\n  " << report.diagnosis << "\n";
  return report.singular ? kExitSingular : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-anchor mmWave downlink positioning toolkit"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* simulate = app.add_subcommand(
      "simulate", "Run one seeded trial and dump all estimates");
  std::string sim_estimators;
  add_common_options(simulate, common);
  simulate->add_option("--estimators", sim_estimators,
                       "Comma list of ml2d,uml,mm (default: all applicable)");

  auto* sweep = app.add_subcommand(
      "sweep", "Monte Carlo RMSE sweep over an axis");
  std::string sweep_axis = "G", sweep_values, sweep_estimators = "ml2d,uml,mm";
  add_common_options(sweep, common);
  sweep->add_option("--axis", sweep_axis, "Sweep axis: G, snr, lmr or grid");
  sweep->add_option("--values", sweep_values,
                    "Axis values: list 1,2,5 or range 1:20 or 0:5:20")
      ->required();
  sweep->add_option("--estimators", sweep_estimators,
                    "Comma list of ml2d,uml,mm (empty = bounds only)");

  auto* bounds = app.add_subcommand(
      "bounds", "CRLB/PEB tables (bounds-only sweep)");
  std::string bounds_axis = "G", bounds_values;
  add_common_options(bounds, common);
  bounds->add_option("--axis", bounds_axis, "Axis: G, snr, lmr or grid");
  bounds->add_option("--values", bounds_values,
                     "Axis values (default: the scenario's G)");

  auto* bench = app.add_subcommand("bench", "Estimator runtime study");
  std::string bench_points = "75,150";
  int bench_repeats = 5;
  std::optional<int> bench_g;
  add_common_options(bench, common);
  bench->add_option("--grid-points", bench_points,
                    "Grid sizes to benchmark (default 75,150)");
  bench->add_option("--repeats", bench_repeats,
                    "Timed repetitions per point (>= 3, default 5)");
  bench->add_option("--g", bench_g, "Transmissions G (default: scenario)");

  auto* check = app.add_subcommand(
      "check-pilots", "Diagnose pilot-design FIM singularity");
  std::optional<double> check_theta_deg;
  add_common_options(check, common);
  check->add_option("--theta-deg", check_theta_deg,
                    "Departure angle to test (default: scenario geometry)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(common, sim_estimators);
    if (sweep->parsed())
      return run_sweep_cmd(common, sweep_axis, sweep_values, sweep_estimators);
    if (bounds->parsed())
      return run_bounds_cmd(common, bounds_axis, bounds_values);
    if (bench->parsed())
      return run_bench_cmd(common, bench_points, bench_repeats, bench_g);
    if (check->parsed()) return run_check_pilots(common, check_theta_deg);
  } catch (const misoloc::inapplicable_estimator_error& e) {
    std::cerr << "error (inapplicable estimator): " << e.what() << "\n";
    return kExitInapplicable;
  } catch (const misoloc::rank_deficiency_error& e) {
    std::cerr << "error (rank deficiency): " << e.what() << "\n";
    return kExitRankDeficient;
  } catch (const misoloc::singular_fim_error& e) {
    std::cerr << "error (singular FIM): " << e.what() << "\n";
    return kExitSingular;
  } catch (const misoloc::config_error& e) {
    std::cerr << "error (configuration): " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}
