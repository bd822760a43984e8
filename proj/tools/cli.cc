// Copyright 2026 The bosloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "bosloc/config.h"
#include "bosloc/csv.h"
#include "bosloc/error.h"
#include "bosloc/fock_oracle.h"
#include "bosloc/localization.h"
#include "bosloc/scaling_study.h"

namespace bosloc {
namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  int realizations = 0;
  int threads = 1;
  std::string json_summary;
  bool refine = false;
};

struct OracleFlags {
  std::vector<double> levels;
  double beta = 1.0;
  double mu = 0.0;
  double lambda = 0.0;
  double volume = 1.0;
  int n_max = 60;
  std::string interaction = "mean-field";
  int sweep = 0;
  int sweep_levels = 4;
};

struct ScheduleFlags {
  int l1 = 3;
  double alpha = 1.5;
  int k = 4;
  int dim = 1;
  double zeta = 0.0;
  double delta = 0.1;
};

ExperimentConfig load(const GlobalFlags& g) {
  if (g.config.empty()) throw ConfigError("--config is required for this subcommand");
  ExperimentConfig c = load_config(g.config);
  if (g.seed_given) {
    c.seed = g.seed;
    c.random.seed = g.seed;
  }
  if (g.realizations > 0) {
    c.realizations = g.realizations;
    c.ids.realizations = g.realizations;
  }
  if (!g.out.empty()) c.output_dir = g.out;
  c.validate();
  return c;
}

int run_study(const GlobalFlags& g, const StudyOutputs& outputs, bool summary, std::ostream& out) {
  const ExperimentConfig c = load(g);
  StudyOptions opts;
  opts.threads = g.threads;
  opts.outputs = outputs;
  const ScalingSeries s = run_scaling_study(c, opts, c.output_dir);
  fmt::print(out, "cells: {} total, {} failed, {} resumed\n", s.total_cells, s.failed_cells,
             s.resumed_cells);
  if (summary) {
    fmt::print(out, "{:>8} {:>14} {:>14} {:>14} {:>14}\n", "l", "median_E1", "median_l1",
               "median_maxkin", "median_gap");
    for (const ScaleSummary& x : s.scales) {
      fmt::print(out, "{:>8} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}\n", x.l, x.median_e1,
                 x.median_l1_phi1, x.median_max_kin, x.median_gap);
    }
    if (s.e1_fit) fmt::print(out, "E1 power-law slope: {:.6f}\n", s.e1_fit->slope);
    fmt::print(out, "l1 trend: {} (p = {:.4g}); max-kinetic trend: {} (p = {:.4g})\n",
               s.l1_trend.pass ? "decreasing" : "not established", s.l1_trend.p_value,
               s.max_kin_trend.pass ? "decreasing" : "not established", s.max_kin_trend.p_value);
    if (!g.json_summary.empty()) write_text_file(g.json_summary, scaling_summary_json(c, s));
    if (g.refine) {
      const auto rows = run_refinement(c, g.threads, c.output_dir);
      for (const auto& r : rows) {
        fmt::print(out, "refine l = {}: E1 {:.10g} -> {:.10g} (rel change {:.3e})\n", r.l, r.e1,
                   r.e1_refined, r.rel_change);
      }
    }
  }
  if (s.failed) {
    fmt::print(out, "study failed: more than {:.0f}% of cells failed (see failures.csv)\n",
               100 * kMaxFailedCellFraction);
    return static_cast<int>(ExitCode::kNumericalFailure);
  }
  return 0;
}

int run_oracle(const GlobalFlags& g, const OracleFlags& o, std::ostream& out) {
  std::vector<DiagonalModelSpec> specs;
  const InteractionKind kind = parse_interaction_kind(o.interaction);
  if (o.sweep > 0) {
    specs = random_diagonal_sweep(o.sweep, o.sweep_levels, g.seed, kind);
  } else {
    if (o.levels.empty()) throw ConfigError("oracle needs --levels or --sweep");
    DiagonalModelSpec spec;
    spec.energies = o.levels;
    spec.beta = o.beta;
    spec.mu = o.mu;
    spec.lambda = o.lambda;
    spec.volume = o.volume;
    spec.n_max = o.n_max;
    spec.interaction = kind;
    try {
      spec.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    specs.push_back(spec);
  }
  const bool sorted_all = std::all_of(specs.begin(), specs.end(), [](const auto& s) {
    return std::is_sorted(s.energies.begin(), s.energies.end());
  });
  CsvTable table(schema::kOracle);
  std::vector<GibbsResult> results;
  for (const DiagonalModelSpec& spec : specs) results.push_back(enumerate_gibbs(spec));
  MonotonicityReport report;
  if (sorted_all) report = monotonicity_certificate(specs, /*enforce=*/false);
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const DiagonalModelSpec& spec = specs[s];
    const GibbsResult& r = results[s];
    const double margin = sorted_all ? report.entries[s].margin : 0.0;
    if (specs.size() == 1) {
      for (std::size_t i = 0; i < r.mean_occupations.size(); ++i) {
        fmt::print(out, "<N_{}> = {:.10f}\n", i + 1, r.mean_occupations[i]);
      }
      fmt::print(out, "ln Z = {:.12g}; tail bound = {:.3e}\n", r.log_partition, r.tail_bound);
    }
    for (std::size_t i = 0; i < r.mean_occupations.size(); ++i) {
      table.add_row({fmt::format("{:016x}", spec.hash()), std::to_string(spec.levels()),
                     csv_number(spec.beta), csv_number(spec.mu), csv_number(spec.lambda),
                     csv_number(spec.volume), to_string(spec.interaction),
                     std::to_string(spec.n_max), std::to_string(i + 1),
                     csv_number(spec.energies[i]), csv_number(r.mean_occupations[i]),
                     csv_number(margin), csv_number(r.tail_bound)});
    }
  }
  if (specs.size() > 1) {
    fmt::print(out, "{} specs, {} monotonicity violations, min margin {:.6e}\n", specs.size(),
               report.violations, report.min_margin);
  }
  if (!g.out.empty()) table.write(fs::path(g.out) / "oracle.csv");
  if (sorted_all && report.violations > 0 && kind != InteractionKind::kCustom) {
    return static_cast<int>(ExitCode::kNumericalFailure);
  }
  return 0;
}

int run_schedule(const ScheduleFlags& f, std::ostream& out) {
  ScheduleConstants k;
  k.delta = f.delta;
  k.zeta = f.zeta;
  MultiscaleSchedule s;
  try {
    s = multiscale_schedule(f.l1, f.alpha, f.k, f.dim, k);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  for (int l : s.lengths) fmt::print(out, "{}\n", l);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"bosloc: localization and Bose condensation laboratory"};
  app.fallthrough(true);
  app.require_subcommand(1, 1);
  GlobalFlags g;
  app.add_option("--config", g.config, "Experiment configuration (INI)");
  app.add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& v) { g.seed = v; g.seed_given = true; },
      "Master seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory (overrides the config)");
  app.add_option("--realizations", g.realizations, "Realizations per scale (overrides the config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--json-summary", g.json_summary, "Write a JSON run summary (scaling)");
  app.add_flag("--refine", g.refine, "Also rerun realization 0 at doubled resolution (scaling)");

  auto* spectrum = app.add_subcommand("spectrum", "Eigenpairs per scale and realization");
  auto* gas = app.add_subcommand("gas", "Chemical potential and occupations");
  auto* overlap = app.add_subcommand("overlap", "Kinetic-mode occupations");
  auto* localize = app.add_subcommand("localize", "Localization diagnostics");
  auto* goodbox = app.add_subcommand("goodbox", "Good-box and decay-inequality sampling");
  auto* ids = app.add_subcommand("ids", "Integrated density of states");
  auto* scaling = app.add_subcommand("scaling", "Full scaling study");
  auto* oracle = app.add_subcommand("oracle", "Exact Fock-space enumeration");
  auto* schedule = app.add_subcommand("schedule", "Multiscale length schedule");

  OracleFlags o;
  oracle->add_option("--levels", o.levels, "Comma-separated level energies")->delimiter(',');
  oracle->add_option("--beta", o.beta, "Inverse temperature");
  oracle->add_option("--mu", o.mu, "Chemical potential");
  oracle->add_option("--lambda", o.lambda, "Interaction strength");
  oracle->add_option("--volume", o.volume, "Volume V");
  oracle->add_option("--nmax", o.n_max, "Total particle number cutoff");
  oracle->add_option("--interaction", o.interaction, "mean-field | self");
  oracle->add_option("--sweep", o.sweep, "Random sweep of this many specs");
  oracle->add_option("--sweep-levels", o.sweep_levels, "Levels per sweep spec");

  ScheduleFlags sf;
  schedule->add_option("--l1", sf.l1, "Initial odd length")->required();
  schedule->add_option("--alpha", sf.alpha, "Growth exponent")->required();
  schedule->add_option("--k", sf.k, "Number of lengths")->required();
  schedule->add_option("--dim", sf.dim, "Dimension");
  schedule->add_option("--zeta", sf.zeta, "Schedule constant zeta (0 selects the default)");
  schedule->add_option("--delta", sf.delta, "Schedule constant delta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(ExitCode::kConfigError);
  }

  try {
    if (spectrum->parsed()) return run_study(g, {true, false, false, false, false}, false, out);
    if (gas->parsed()) return run_study(g, {true, true, false, false, false}, false, out);
    if (overlap->parsed()) return run_study(g, {true, true, true, false, false}, false, out);
    if (localize->parsed()) return run_study(g, {true, false, false, true, false}, false, out);
    if (scaling->parsed()) return run_study(g, {true, true, true, true, true}, true, out);
    if (goodbox->parsed()) {
      const ExperimentConfig c = load(g);
      const GoodBoxStudy s = run_goodbox_study(c, g.threads, c.output_dir);
      for (const auto& x : s.lengths) {
        fmt::print(out, "l_k = {}: good fraction {:.4f} of {} (reference {:.6f}), max ratio {:.4g}\n",
                   x.l_k, x.good_fraction, x.samples, x.reference, x.max_decay_ratio);
      }
      fmt::print(out, "kappa_hat = {:.6g}; failed samples {}\n", s.kappa_hat, s.failures);
      return 0;
    }
    if (ids->parsed()) {
      const ExperimentConfig c = load(g);
      const IdsCurve curve = run_ids_study(c, g.threads, c.output_dir);
      fmt::print(out, "IDS on L = {} from {} realizations: nu({}) = {:.6g}\n", curve.box_side,
                 curve.realizations, curve.energies.back(), curve.nu_hat.back());
      return 0;
    }
    if (oracle->parsed()) return run_oracle(g, o, out);
    if (schedule->parsed()) return run_schedule(sf, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(exit_code_for(e));
  }
  return 0;
}

}  // namespace bosloc
