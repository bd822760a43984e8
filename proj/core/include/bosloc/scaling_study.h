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

#ifndef BOSLOC_SCALING_STUDY_H_
#define BOSLOC_SCALING_STUDY_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bosloc/config.h"
#include "bosloc/localization.h"
#include "bosloc/statistics.h"

namespace bosloc {

// A study fails overall when more than this fraction of cells fail.
inline constexpr double kMaxFailedCellFraction = 0.1;
// Sample-wise inequality slack.
inline constexpr double kInequalitySlack = 1e-10;
// Condensed regime: E_1 - mu_eff at the largest scale.
inline constexpr double kCondensedGap = 1e-3;

struct StudyOutputs {
  bool spectrum = true;
  bool occupations = true;
  bool kinetic = true;
  bool localization = true;
  bool scaling = true;
};

struct StudyOptions {
  int threads = 1;
  bool resume = true;
  StudyOutputs outputs;
};

// One (scale, realization) work cell.
struct CellSummary {
  double l = 0.0;
  int realization = 0;
  bool ok = false;
  std::string stage;
  std::string error;

  double e1 = 0.0;
  double mu = 0.0;
  double mu_effective = 0.0;
  double gap = 0.0;
  double tail_density = 0.0;
  double density_error = 0.0;  // |sum rho + tail - rho_bar| / rho_bar
  double max_kin = 0.0;
  double max_truncation_residual = 0.0;
  bool truncation_warning = false;
  double l1_phi1 = 0.0;
  double type_iii_bound = 0.0;
  bool dominance_ok = true;
  double e1_bound = 0.0;
  double e1_minmax_bound = 0.0;
  double e1_sup_bound = 0.0;
  int davies_failures = 0;
  std::vector<double> band_eig;  // per delta
  std::vector<double> band_kin;

  std::string spectrum_rows;
  std::string occupation_rows;
  std::string kinetic_rows;
  std::string localization_rows;
};

struct ScaleSummary {
  double l = 0.0;
  int realizations = 0;
  int failed = 0;
  double median_e1 = 0.0;
  double median_gap = 0.0;
  double median_max_kin = 0.0;
  double median_l1_phi1 = 0.0;
  double median_type_iii_bound = 0.0;
  std::vector<double> median_band_eig;
  std::vector<double> median_band_kin;
  std::vector<double> min_band_eig;
};

struct StudyChecks {
  int e1_bound_violations = 0;
  int e1_minmax_violations = 0;
  int dominance_violations = 0;
  int davies_failures = 0;
  int truncation_warnings = 0;
  double max_density_error = 0.0;
};

struct ScalingSeries {
  std::vector<ScaleSummary> scales;
  std::vector<CellSummary> cells;  // scale-major, realization-minor
  std::optional<PowerLawFit> e1_fit;
  TrendTest l1_trend;
  TrendTest max_kin_trend;
  StudyChecks checks;
  int failed_cells = 0;
  int total_cells = 0;
  int resumed_cells = 0;
  bool failed = false;
  double largest_scale_gap = 0.0;
  bool condensed = false;
};

// Runs every cell (resuming from cached cell records under
// out/cells/<config hash>), then writes the selected CSV files.
ScalingSeries run_scaling_study(const ExperimentConfig& config, const StudyOptions& options,
                                const std::filesystem::path& out);

std::string scaling_summary_json(const ExperimentConfig& config, const ScalingSeries& series);

struct RefinementRow {
  double l = 0.0;
  int points_per_unit = 0;
  double e1 = 0.0;
  double e1_refined = 0.0;
  double rel_change = 0.0;
  double l1 = 0.0;
  double l1_refined = 0.0;
};

// Realization 0 of every scale at the configured and doubled resolution;
// writes refine.csv.
std::vector<RefinementRow> run_refinement(const ExperimentConfig& config, int threads,
                                          const std::filesystem::path& out);

struct GoodBoxLengthSummary {
  int l_k = 0;
  int samples = 0;
  int good = 0;
  double good_fraction = 0.0;
  double reference = 0.0;  // 1 - l_k^{-2 zeta}
  double max_decay_ratio = 0.0;
  int shifted = 0;
};

struct GoodBoxStudy {
  MultiscaleSchedule schedule;
  std::vector<GoodBoxLengthSummary> lengths;
  double kappa_hat = 0.0;  // max decay ratio over the run
  int failures = 0;
};

// Writes goodbox.csv, decay.csv and goodbox_summary.csv.
GoodBoxStudy run_goodbox_study(const ExperimentConfig& config, int threads,
                               const std::filesystem::path& out);

// Writes ids.csv.
IdsCurve run_ids_study(const ExperimentConfig& config, int threads,
                       const std::filesystem::path& out);

// Seed of the iterative eigensolver start block for a work cell.
std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t scale_index, std::uint64_t realization);

}  // namespace bosloc

#endif  // BOSLOC_SCALING_STUDY_H_
