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

#include "bosloc/scaling_study.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <oneapi/tbb/parallel_for.h>
#include <oneapi/tbb/info.h>
#include <oneapi/tbb/task_arena.h>

#include "bosloc/bose_gas.h"
#include "bosloc/condensate.h"
#include "bosloc/csv.h"
#include "bosloc/error.h"
#include "bosloc/hamiltonian.h"
#include "bosloc/philox.h"
#include "bosloc/potential.h"
#include "bosloc/spectrum_cache.h"

namespace bosloc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kCellFormat = 1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename F>
void run_parallel(int threads, std::size_t count, F&& body) {
  // Oversubscribing the hardware only triggers a TBB warning; results do not depend on it.
  const int workers = std::clamp(threads, 1, std::max(tbb::info::default_concurrency(), 1));
  tbb::task_arena arena(workers);
  arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, count, [&](std::size_t i) { body(i); });
  });
}

Grid scale_grid(const ExperimentConfig& c, double l, int points_per_unit) {
  return grid_with_resolution(c.dim, l, points_per_unit, c.max_points);
}

PotentialField make_field(const ExperimentConfig& c, const Grid& grid, int realization) {
  if (c.model == ModelKind::kRandom) {
    RandomPotentialSpec spec = c.random;
    spec.seed = c.seed;
    return sample_random_potential(spec, grid, static_cast<std::uint64_t>(realization));
  }
  WeakPotentialSpec spec = c.weak;
  spec.dim = c.dim;
  return evaluate_weak_potential(spec, grid);
}

Spectrum solve_spectrum(const ExperimentConfig& c, const SymmetricOperator& op,
                        const PotentialField& field, std::size_t m, std::uint64_t seed,
                        const fs::path& out) {
  EigenOptions opts = c.eigen;
  opts.seed = seed;
  if (!c.spectrum_cache) return lowest_eigenpairs(op, m, c.tol, opts);
  const SpectrumCache cache(out / "cache");
  const SpectrumCacheKey key{op.grid(), field.provenance_hash(), m, c.tol};
  if (auto hit = cache.load(key)) return *hit;
  Spectrum s = lowest_eigenpairs(op, m, c.tol, opts);
  cache.store(key, s);
  return s;
}

std::string flat_mode_index(const Grid& grid, const KineticMode& mode) {
  std::array<int, 3> m = {0, 0, 0};
  for (int a = 0; a < grid.dim; ++a) m[a] = mode.index[a] - 1;
  return std::to_string(grid.flatten(m));
}

CellSummary compute_cell(const ExperimentConfig& c, std::size_t scale_index, int realization,
                         const fs::path& out) {
  CellSummary cell;
  cell.l = c.scales[scale_index];
  cell.realization = realization;
  const std::string l_str = csv_number(cell.l);
  const std::string r_str = std::to_string(realization);
  try {
    cell.stage = "potential";
    const Grid grid = scale_grid(c, cell.l, c.points_per_unit);
    const PotentialField field = make_field(c, grid, realization);
    const SymmetricOperator op = assemble_hamiltonian(grid, field);

    cell.stage = "eigensolver";
    const auto m = static_cast<std::size_t>(c.levels_at(scale_index));
    const Spectrum spectrum = solve_spectrum(
        c, op, field, m, cell_seed(c.seed, scale_index, static_cast<std::uint64_t>(realization)),
        out);
    cell.e1 = spectrum.energies.front();
    for (std::size_t i = 0; i < m; ++i) {
      cell.spectrum_rows += csv_row({l_str, r_str, std::to_string(i + 1),
                                     csv_number(spectrum.energies[i]),
                                     csv_number(spectrum.residuals[i])});
    }

    cell.stage = "bose-gas";
    const PotentialStats stats = potential_stats(field);
    const OccupationProfile profile =
        solve_chemical_potential(spectrum, c.gas, TailSpec{c.tail, stats.mean});
    cell.mu = profile.mu;
    cell.mu_effective = profile.mu_effective;
    cell.gap = profile.gap();
    cell.tail_density = profile.tail_density;
    double total = profile.tail_density;
    for (double r : profile.densities) total += r;
    cell.density_error = std::abs(total - c.gas.rho_bar) / c.gas.rho_bar;
    for (std::size_t i = 0; i < m; ++i) {
      cell.occupation_rows += csv_row(
          {l_str, r_str, std::to_string(i + 1), csv_number(profile.energies[i]),
           csv_number(profile.densities[i]), csv_number(profile.mu),
           csv_number(profile.mu_effective), csv_number(c.gas.beta), csv_number(c.gas.rho_bar),
           csv_number(c.gas.lambda), to_string(profile.tail_model),
           csv_number(profile.tail_density)});
    }

    cell.stage = "condensate";
    const auto k_count = static_cast<std::size_t>(c.kinetic_modes_at(scale_index));
    const std::vector<KineticMode> modes = kinetic_modes(grid, k_count);
    const OverlapMatrix overlaps = overlap_matrix(spectrum, modes);
    const KineticOccupations kin = kinetic_occupations(overlaps, profile);
    cell.max_kin = *std::max_element(kin.densities.begin(), kin.densities.end());
    cell.max_truncation_residual = kin.max_residual;
    cell.truncation_warning = kin.truncation_warning;
    std::vector<double> eps(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) {
      eps[k] = modes[k].energy;
      cell.kinetic_rows +=
          csv_row({l_str, r_str, flat_mode_index(grid, modes[k]), csv_number(modes[k].energy),
                   csv_number(kin.densities[k]), csv_number(kin.truncation_residuals[k])});
    }
    for (double delta : c.deltas) {
      cell.band_eig.push_back(condensate_band_density(profile.densities, profile.energies, delta));
      cell.band_kin.push_back(condensate_band_density(kin.densities, eps, delta));
    }

    cell.stage = "localization";
    std::vector<double> l1(m);
    for (std::size_t i = 0; i < m; ++i) l1[i] = l1_metric(grid, spectrum.eigenfunction(i));
    cell.l1_phi1 = l1.front();
    cell.type_iii_bound =
        best_type_iii_bound(profile, l1, kinetic_sup_bound(grid), c.gas.rho_bar);
    cell.dominance_ok = cell.max_kin <= cell.type_iii_bound + kInequalitySlack;
    const LocalizationReport report =
        localization_report(spectrum, static_cast<std::size_t>(c.localization_levels));
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      const auto& e = report.entries[i];
      if (!e.davies.pass) ++cell.davies_failures;
      cell.localization_rows += csv_row(
          {l_str, r_str, std::to_string(i + 1), csv_number(e.energy), csv_number(e.l1_metric),
           csv_number(e.sup_norm), csv_number(e.ipr), e.davies.pass ? "1" : "0"});
    }
    cell.e1_bound = e1_upper_bound(field);
    cell.e1_minmax_bound = e1_minmax_bound(field);
    cell.e1_sup_bound = e1_sup_bound(field);
    cell.stage = "done";
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
    cell.spectrum_rows.clear();
    cell.occupation_rows.clear();
    cell.kinetic_rows.clear();
    cell.localization_rows.clear();
  }
  return cell;
}

json cell_to_json(const CellSummary& c, std::uint64_t config_hash) {
  return json{{"format", kCellFormat},
              {"config_hash", config_hash},
              {"l", c.l},
              {"realization", c.realization},
              {"ok", c.ok},
              {"stage", c.stage},
              {"error", c.error},
              {"e1", c.e1},
              {"mu", c.mu},
              {"mu_effective", c.mu_effective},
              {"gap", c.gap},
              {"tail_density", c.tail_density},
              {"density_error", c.density_error},
              {"max_kin", c.max_kin},
              {"max_truncation_residual", c.max_truncation_residual},
              {"truncation_warning", c.truncation_warning},
              {"l1_phi1", c.l1_phi1},
              {"type_iii_bound", c.type_iii_bound},
              {"dominance_ok", c.dominance_ok},
              {"e1_bound", c.e1_bound},
              {"e1_minmax_bound", c.e1_minmax_bound},
              {"e1_sup_bound", c.e1_sup_bound},
              {"davies_failures", c.davies_failures},
              {"band_eig", c.band_eig},
              {"band_kin", c.band_kin},
              {"spectrum_rows", c.spectrum_rows},
              {"occupation_rows", c.occupation_rows},
              {"kinetic_rows", c.kinetic_rows},
              {"localization_rows", c.localization_rows}};
}

std::optional<CellSummary> cell_from_json(const json& j, std::uint64_t config_hash) {
  if (j.value("format", 0) != kCellFormat || j.value("config_hash", std::uint64_t{0}) != config_hash)
    return std::nullopt;
  CellSummary c;
  j.at("l").get_to(c.l);
  j.at("realization").get_to(c.realization);
  j.at("ok").get_to(c.ok);
  j.at("stage").get_to(c.stage);
  j.at("error").get_to(c.error);
  j.at("e1").get_to(c.e1);
  j.at("mu").get_to(c.mu);
  j.at("mu_effective").get_to(c.mu_effective);
  j.at("gap").get_to(c.gap);
  j.at("tail_density").get_to(c.tail_density);
  j.at("density_error").get_to(c.density_error);
  j.at("max_kin").get_to(c.max_kin);
  j.at("max_truncation_residual").get_to(c.max_truncation_residual);
  j.at("truncation_warning").get_to(c.truncation_warning);
  j.at("l1_phi1").get_to(c.l1_phi1);
  j.at("type_iii_bound").get_to(c.type_iii_bound);
  j.at("dominance_ok").get_to(c.dominance_ok);
  j.at("e1_bound").get_to(c.e1_bound);
  j.at("e1_minmax_bound").get_to(c.e1_minmax_bound);
  j.at("e1_sup_bound").get_to(c.e1_sup_bound);
  j.at("davies_failures").get_to(c.davies_failures);
  j.at("band_eig").get_to(c.band_eig);
  j.at("band_kin").get_to(c.band_kin);
  j.at("spectrum_rows").get_to(c.spectrum_rows);
  j.at("occupation_rows").get_to(c.occupation_rows);
  j.at("kinetic_rows").get_to(c.kinetic_rows);
  j.at("localization_rows").get_to(c.localization_rows);
  return c;
}

std::optional<CellSummary> load_cell(const fs::path& path, std::uint64_t config_hash) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  try {
    return cell_from_json(json::parse(read_text_file(path)), config_hash);
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable records are recomputed
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::string delta_label(double delta) { return fmt::format("{}", delta); }

std::vector<double> collect(const std::vector<const CellSummary*>& cells,
                            double CellSummary::*field) {
  std::vector<double> v;
  for (const CellSummary* c : cells) v.push_back(c->*field);
  return v;
}

json trend_json(const TrendTest& t) {
  return json{{"theil_sen_slope", t.theil_sen_slope},
              {"negative_pairs", t.negative_pairs},
              {"pairs", t.pairs},
              {"p_value", t.p_value},
              {"strictly_decreasing", t.strictly_decreasing},
              {"enough_scales", t.enough_scales},
              {"pass", t.pass}};
}

std::string center_label(const std::array<int, 3>& c, int dim) {
  std::string s;
  for (int a = 0; a < dim; ++a) {
    if (a > 0) s += ';';
    s += std::to_string(c[a]);
  }
  return s;
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t scale_index, std::uint64_t realization) {
  return splitmix64(seed ^ splitmix64((scale_index << 32) ^ realization));
}

ScalingSeries run_scaling_study(const ExperimentConfig& config, const StudyOptions& options,
                                const fs::path& out) {
  config.validate();
  ensure_directory(out);
  const std::uint64_t config_hash = config.hash();
  const fs::path cell_dir = out / "cells" / fmt::format("{:016x}", config_hash);
  ensure_directory(cell_dir);

  const std::size_t n_scales = config.scales.size();
  const auto n_real = static_cast<std::size_t>(config.realizations);
  ScalingSeries series;
  series.cells.resize(n_scales * n_real);
  series.total_cells = static_cast<int>(series.cells.size());
  std::vector<char> resumed(series.cells.size(), 0);

  run_parallel(options.threads, series.cells.size(), [&](std::size_t idx) {
    const std::size_t s = idx / n_real;
    const int r = static_cast<int>(idx % n_real);
    const fs::path path = cell_dir / fmt::format("s{}_r{}.json", s, r);
    if (options.resume) {
      if (auto cached = load_cell(path, config_hash)) {
        series.cells[idx] = std::move(*cached);
        resumed[idx] = 1;
        return;
      }
    }
    series.cells[idx] = compute_cell(config, s, r, out);
    write_text_file(path, cell_to_json(series.cells[idx], config_hash).dump());
  });
  series.resumed_cells = static_cast<int>(std::count(resumed.begin(), resumed.end(), 1));

  // Ordered reductions.
  const std::size_t n_delta = config.deltas.size();
  for (std::size_t s = 0; s < n_scales; ++s) {
    ScaleSummary sum;
    sum.l = config.scales[s];
    std::vector<const CellSummary*> ok;
    for (std::size_t r = 0; r < n_real; ++r) {
      const CellSummary& c = series.cells[s * n_real + r];
      if (c.ok) ok.push_back(&c); else ++sum.failed;
    }
    sum.realizations = static_cast<int>(ok.size());
    if (!ok.empty()) {
      sum.median_e1 = median(collect(ok, &CellSummary::e1));
      sum.median_gap = median(collect(ok, &CellSummary::gap));
      sum.median_max_kin = median(collect(ok, &CellSummary::max_kin));
      sum.median_l1_phi1 = median(collect(ok, &CellSummary::l1_phi1));
      sum.median_type_iii_bound = median(collect(ok, &CellSummary::type_iii_bound));
      for (std::size_t d = 0; d < n_delta; ++d) {
        std::vector<double> eig, kin;
        for (const CellSummary* c : ok) {
          eig.push_back(c->band_eig[d]);
          kin.push_back(c->band_kin[d]);
        }
        sum.median_band_eig.push_back(median(eig));
        sum.median_band_kin.push_back(median(kin));
        sum.min_band_eig.push_back(*std::min_element(eig.begin(), eig.end()));
      }
    } else {
      sum.median_band_eig.assign(n_delta, 0.0);
      sum.median_band_kin.assign(n_delta, 0.0);
      sum.min_band_eig.assign(n_delta, 0.0);
    }
    series.scales.push_back(std::move(sum));
  }
  for (const CellSummary& c : series.cells) {
    if (!c.ok) {
      ++series.failed_cells;
      continue;
    }
    auto& k = series.checks;
    if (config.model == ModelKind::kRandom && c.e1 > c.e1_bound + kInequalitySlack)
      ++k.e1_bound_violations;
    if (c.e1 > c.e1_minmax_bound + kInequalitySlack) ++k.e1_minmax_violations;
    if (!c.dominance_ok) ++k.dominance_violations;
    k.davies_failures += c.davies_failures;
    if (c.truncation_warning) ++k.truncation_warnings;
    k.max_density_error = std::max(k.max_density_error, c.density_error);
  }
  series.failed = series.failed_cells > kMaxFailedCellFraction * series.total_cells;

  std::vector<double> ls, e1s, l1s, kins;
  bool all_present = true;
  for (const ScaleSummary& s : series.scales) {
    all_present = all_present && s.realizations > 0;
    ls.push_back(s.l);
    e1s.push_back(s.median_e1);
    l1s.push_back(s.median_l1_phi1);
    kins.push_back(s.median_max_kin);
  }
  if (all_present && ls.size() >= 3) series.e1_fit = fit_power_law(ls, e1s);
  if (all_present) {
    series.l1_trend = decreasing_trend(ls, l1s);
    series.max_kin_trend = decreasing_trend(ls, kins);
  }
  series.largest_scale_gap = series.scales.back().median_gap;
  series.condensed = series.scales.back().realizations > 0 && series.largest_scale_gap < kCondensedGap;

  const StudyOutputs& w = options.outputs;
  CsvTable spectrum(schema::kSpectrum), occ(schema::kOccupations), kin(schema::kKinetic),
      loc(schema::kLocalization);
  CsvTable failures({"l", "realization", "stage", "error"});
  for (const CellSummary& c : series.cells) {
    spectrum.append_rendered(c.spectrum_rows);
    occ.append_rendered(c.occupation_rows);
    kin.append_rendered(c.kinetic_rows);
    loc.append_rendered(c.localization_rows);
    if (!c.ok) {
      failures.add_row({csv_number(c.l), std::to_string(c.realization), c.stage, quote(c.error)});
    }
  }
  if (w.spectrum) spectrum.write(out / "spectrum.csv");
  if (w.occupations) occ.write(out / "occupations.csv");
  if (w.kinetic) kin.write(out / "kinetic.csv");
  if (w.localization) loc.write(out / "localization.csv");
  failures.write(out / "failures.csv");
  if (w.scaling) {
    std::vector<std::string> cols = {"l", "realizations", "failed", "median_E1", "median_mu_gap",
                                     "median_max_kin", "median_l1_phi1",
                                     "median_type_iii_bound"};
    for (double d : config.deltas) {
      const std::string t = delta_label(d);
      cols.push_back("median_band_eig_" + t);
      cols.push_back("median_band_kin_" + t);
      cols.push_back("min_band_eig_" + t);
    }
    CsvTable table(cols);
    for (const ScaleSummary& s : series.scales) {
      std::vector<std::string> row = {csv_number(s.l),
                                      std::to_string(s.realizations),
                                      std::to_string(s.failed),
                                      csv_number(s.median_e1),
                                      csv_number(s.median_gap),
                                      csv_number(s.median_max_kin),
                                      csv_number(s.median_l1_phi1),
                                      csv_number(s.median_type_iii_bound)};
      for (std::size_t d = 0; d < n_delta; ++d) {
        row.push_back(csv_number(s.median_band_eig[d]));
        row.push_back(csv_number(s.median_band_kin[d]));
        row.push_back(csv_number(s.min_band_eig[d]));
      }
      table.add_row(row);
    }
    table.write(out / "scaling.csv");
  }
  return series;
}

std::string scaling_summary_json(const ExperimentConfig& config, const ScalingSeries& series) {
  json scales = json::array();
  for (const ScaleSummary& s : series.scales) {
    json bands = json::array();
    for (std::size_t d = 0; d < config.deltas.size(); ++d) {
      bands.push_back({{"delta", config.deltas[d]},
                       {"median_band_eig", s.median_band_eig[d]},
                       {"median_band_kin", s.median_band_kin[d]},
                       {"min_band_eig", s.min_band_eig[d]}});
    }
    scales.push_back({{"l", s.l},
                      {"realizations", s.realizations},
                      {"failed", s.failed},
                      {"median_E1", s.median_e1},
                      {"median_mu_gap", s.median_gap},
                      {"median_max_kin", s.median_max_kin},
                      {"median_l1_phi1", s.median_l1_phi1},
                      {"median_type_iii_bound", s.median_type_iii_bound},
                      {"bands", bands}});
  }
  json fits = json::object();
  if (series.e1_fit) {
    fits["E1"] = {{"slope", series.e1_fit->slope},
                  {"intercept", series.e1_fit->intercept},
                  {"r_squared", series.e1_fit->r_squared}};
  }
  const auto& k = series.checks;
  json j = {{"config_hash", fmt::format("{:016x}", config.hash())},
            {"model", to_string(config.model)},
            {"seed", config.seed},
            {"scales", scales},
            {"fits", fits},
            {"trends",
             {{"l1_phi1", trend_json(series.l1_trend)},
              {"max_kin", trend_json(series.max_kin_trend)}}},
            {"checks",
             {{"e1_bound_violations", k.e1_bound_violations},
              {"e1_minmax_violations", k.e1_minmax_violations},
              {"dominance_violations", k.dominance_violations},
              {"davies_failures", k.davies_failures},
              {"truncation_warnings", k.truncation_warnings},
              {"max_density_error", k.max_density_error}}},
            {"condensed_regime",
             {{"gap_at_largest_scale", series.largest_scale_gap},
              {"threshold", kCondensedGap},
              {"condensed", series.condensed}}},
            {"tail_model", to_string(config.tail)},
            {"failed_cells", series.failed_cells},
            {"total_cells", series.total_cells},
            {"status", series.failed ? "failed" : "ok"}};
  return j.dump(2) + "\n";
}

std::vector<RefinementRow> run_refinement(const ExperimentConfig& config, int threads,
                                          const fs::path& out) {
  std::vector<RefinementRow> rows(config.scales.size());
  run_parallel(threads, rows.size(), [&](std::size_t s) {
    RefinementRow& row = rows[s];
    row.l = config.scales[s];
    row.points_per_unit = config.points_per_unit;
    double e1[2], l1[2];
    for (int pass = 0; pass < 2; ++pass) {
      const Grid grid = scale_grid(config, row.l, config.points_per_unit << pass);
      const PotentialField field = make_field(config, grid, 0);
      const SymmetricOperator op = assemble_hamiltonian(grid, field);
      EigenOptions opts = config.eigen;
      opts.seed = cell_seed(config.seed, s, 0);
      const Spectrum sp = lowest_eigenpairs(op, 1, config.tol, opts);
      e1[pass] = sp.energies.front();
      l1[pass] = l1_metric(grid, sp.eigenfunction(0));
    }
    row.e1 = e1[0];
    row.e1_refined = e1[1];
    row.rel_change = std::abs(e1[1] - e1[0]) / std::abs(e1[1]);
    row.l1 = l1[0];
    row.l1_refined = l1[1];
  });
  CsvTable t({"l", "realization", "points_per_unit", "E_1", "points_per_unit_refined",
              "E_1_refined", "rel_change", "l1_metric", "l1_metric_refined"});
  for (const auto& r : rows) {
    t.add_row({csv_number(r.l), "0", std::to_string(r.points_per_unit), csv_number(r.e1),
               std::to_string(2 * r.points_per_unit), csv_number(r.e1_refined),
               csv_number(r.rel_change), csv_number(r.l1), csv_number(r.l1_refined)});
  }
  t.write(out / "refine.csv");
  return rows;
}

GoodBoxStudy run_goodbox_study(const ExperimentConfig& config, int threads, const fs::path& out) {
  const GoodBoxConfig& gb = config.goodbox;
  GoodBoxStudy study;
  study.schedule =
      multiscale_schedule(gb.l1, gb.alpha, gb.count, config.dim, gb.constants);
  const double parent_side = gb.scale > 0.0 ? gb.scale : config.scales.back();
  const Grid parent = scale_grid(config, parent_side, config.points_per_unit);
  std::vector<int> lengths;
  for (int l : study.schedule.lengths) {
    if (l + 2 <= parent_side) lengths.push_back(l);
  }
  if (lengths.empty()) throw ConfigError("no schedule length fits inside the good-box parent");

  struct Sample {
    int realization = 0;
    int l_k = 0;
    std::array<int, 3> center{};
    bool ok = false;
    GoodBoxResult box;
    std::vector<DecayCheck> decay;
    std::vector<double> decay_energy;
    std::string error;
  };
  const auto n_real = static_cast<std::size_t>(config.realizations);
  const std::size_t per_real = lengths.size() * static_cast<std::size_t>(gb.centers);
  std::vector<Sample> samples(n_real * per_real);

  run_parallel(threads, n_real, [&](std::size_t r) {
    const PotentialField field = make_field(config, parent, static_cast<int>(r));
    const SymmetricOperator op = assemble_hamiltonian(parent, field);
    EigenOptions opts = config.eigen;
    opts.seed = cell_seed(config.seed, 0xb0c5, r);
    std::optional<Spectrum> spectrum;
    std::string spectrum_error;
    try {
      spectrum = lowest_eigenpairs(op, static_cast<std::size_t>(gb.decay_levels), config.tol, opts);
    } catch (const std::exception& e) {
      spectrum_error = e.what();
    }
    PhiloxStream stream(config.seed, 0x676f6f64ULL ^ (static_cast<std::uint64_t>(r) << 20));
    for (std::size_t li = 0; li < lengths.size(); ++li) {
      const int l_k = lengths[li];
      // Lattice centres with the whole sub-box inside the parent.
      const int reach = static_cast<int>(std::floor(0.5 * (parent_side - l_k) + 1e-9));
      for (int ci = 0; ci < gb.centers; ++ci) {
        Sample& smp = samples[r * per_real + li * static_cast<std::size_t>(gb.centers) +
                              static_cast<std::size_t>(ci)];
        smp.realization = static_cast<int>(r);
        smp.l_k = l_k;
        for (int a = 0; a < config.dim; ++a) {
          const double u = stream.uniform();
          smp.center[a] = -reach + static_cast<int>(std::floor(u * (2 * reach + 1)));
        }
        try {
          smp.box = good_box_test(field, smp.center, l_k, gb.energy, gb.gamma);
          if (!spectrum) throw NumericalError(spectrum_error);
          for (std::size_t i = 0; i < spectrum->size(); ++i) {
            smp.decay.push_back(decay_inequality_check(spectrum->eigenfunction(i),
                                                       spectrum->energies[i], field,
                                                       smp.center, l_k));
            smp.decay_energy.push_back(spectrum->energies[i]);
          }
          smp.ok = true;
        } catch (const std::exception& e) {
          smp.error = e.what();
        }
      }
    }
  });

  CsvTable boxes(schema::kGoodBox);
  CsvTable decay({"realization", "l_k", "center", "level", "E", "lhs", "rhs_norm", "ratio",
                  "eps_shift"});
  study.lengths.resize(lengths.size());
  for (std::size_t li = 0; li < lengths.size(); ++li) {
    study.lengths[li].l_k = lengths[li];
    study.lengths[li].reference = 1.0 - std::pow(lengths[li], -2.0 * study.schedule.zeta);
  }
  for (const Sample& s : samples) {
    const std::size_t li =
        static_cast<std::size_t>(std::find(lengths.begin(), lengths.end(), s.l_k) - lengths.begin());
    auto& agg = study.lengths[li];
    if (!s.ok) {
      ++study.failures;
      continue;
    }
    ++agg.samples;
    if (s.box.is_good) ++agg.good;
    if (s.box.eps_shift != 0.0) ++agg.shifted;
    const std::string center = center_label(s.center, config.dim);
    boxes.add_row({std::to_string(s.l_k), center, csv_number(s.box.energy), csv_number(s.box.norm),
                   csv_number(gb.gamma), s.box.is_good ? "1" : "0", csv_number(s.box.eps_shift),
                   std::to_string(s.realization), std::to_string(s.box.interior_points_per_side),
                   csv_number(s.box.threshold)});
    for (std::size_t i = 0; i < s.decay.size(); ++i) {
      const DecayCheck& d = s.decay[i];
      agg.max_decay_ratio = std::max(agg.max_decay_ratio, d.ratio());
      study.kappa_hat = std::max(study.kappa_hat, d.ratio());
      decay.add_row({std::to_string(s.realization), std::to_string(s.l_k), center,
                     std::to_string(i + 1), csv_number(s.decay_energy[i] + d.eps_shift),
                     csv_number(d.lhs), csv_number(d.rhs_norm), csv_number(d.ratio()),
                     csv_number(d.eps_shift)});
    }
  }
  CsvTable summary({"l_k", "samples", "good", "good_fraction", "reference_1_minus_l_pow_m2zeta",
                    "max_decay_ratio", "kappa_hat", "shifted", "zeta", "M", "spacing"});
  const double bound_m = config.model == ModelKind::kRandom ? config.random.bound() : 0.0;
  for (auto& agg : study.lengths) {
    agg.good_fraction = agg.samples > 0 ? static_cast<double>(agg.good) / agg.samples : 0.0;
    summary.add_row({std::to_string(agg.l_k), std::to_string(agg.samples), std::to_string(agg.good),
                     csv_number(agg.good_fraction), csv_number(agg.reference),
                     csv_number(agg.max_decay_ratio), csv_number(study.kappa_hat),
                     std::to_string(agg.shifted), csv_number(study.schedule.zeta),
                     csv_number(bound_m), csv_number(parent.spacing)});
  }
  boxes.write(out / "goodbox.csv");
  decay.write(out / "decay.csv");
  summary.write(out / "goodbox_summary.csv");
  return study;
}

IdsCurve run_ids_study(const ExperimentConfig& config, int threads, const fs::path& out) {
  const IdsConfig& ic = config.ids;
  const Grid grid = scale_grid(config, ic.box, config.points_per_unit);
  std::vector<double> energies(static_cast<std::size_t>(ic.points));
  for (int i = 0; i < ic.points; ++i) {
    energies[static_cast<std::size_t>(i)] =
        ic.points == 1 ? ic.e_max : ic.e_min + (ic.e_max - ic.e_min) * i / (ic.points - 1);
  }
  std::size_t m0 = static_cast<std::size_t>(ic.levels);
  if (m0 == 0) {
    // Free Weyl count at e_max with head room.
    const double d = config.dim;
    const double ball = config.dim == 1 ? 2.0 : (config.dim == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0);
    const double weyl =
        grid.volume() * ball * std::pow(2.0 * std::max(ic.e_max, 0.0), 0.5 * d) /
        std::pow(2.0 * std::numbers::pi, d);
    m0 = static_cast<std::size_t>(1.5 * weyl) + 16;
  }
  m0 = std::min(m0, grid.size());
  const auto n_real = static_cast<std::size_t>(ic.realizations);
  std::vector<Spectrum> samples(n_real);
  run_parallel(threads, n_real, [&](std::size_t r) {
    const PotentialField field = make_field(config, grid, static_cast<int>(r));
    const SymmetricOperator op = assemble_hamiltonian(grid, field);
    EigenOptions opts = config.eigen;
    opts.seed = cell_seed(config.seed, 0x1d5, r);
    std::size_t m = m0;
    for (;;) {
      Spectrum s = lowest_eigenpairs(op, m, config.tol, opts);
      if (s.energies.back() > ic.e_max || m == grid.size()) {
        samples[r] = std::move(s);
        return;
      }
      m = std::min(grid.size(), 2 * m);
    }
  });
  IdsCurve curve = ids_estimate(samples, energies);
  CsvTable t(schema::kIds);
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    t.add_row({csv_number(curve.box_side), csv_number(curve.energies[i]),
               csv_number(curve.nu_hat[i]), csv_number(curve.stderr_[i]),
               std::to_string(curve.realizations)});
  }
  t.write(out / "ids.csv");
  return curve;
}

}  // namespace bosloc
