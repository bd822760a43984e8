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

#ifndef BOSLOC_CONFIG_H_
#define BOSLOC_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bosloc/bose_gas.h"
#include "bosloc/eigensolver.h"
#include "bosloc/localization.h"
#include "bosloc/potential.h"

namespace bosloc {

enum class ModelKind { kRandom, kWeak };

struct GoodBoxConfig {
  int l1 = 9;
  double alpha = 1.2;
  int count = 3;
  double gamma = 0.1;
  double energy = 0.01;
  double scale = 0.0;      // parent box side; 0 selects the largest scale
  int centers = 8;         // sub-box centres per length and realization
  int decay_levels = 1;    // parent eigenpairs used in the decay check
  ScheduleConstants constants;
};

struct IdsConfig {
  double box = 64.0;
  int realizations = 200;
  double e_min = 0.0;
  double e_max = 0.5;
  int points = 51;
  int levels = 0;  // 0 selects enough to cover e_max
};

struct ExperimentConfig {
  ModelKind model = ModelKind::kRandom;
  int dim = 1;
  int points_per_unit = 16;
  std::vector<double> scales;
  std::vector<int> levels;         // one entry, or one per scale
  std::vector<int> kinetic_modes;  // empty selects `levels`
  int realizations = 1;
  std::uint64_t seed = 0;
  std::vector<double> deltas = {0.05};
  int localization_levels = 4;
  double tol = 1e-9;
  EigenOptions eigen;
  std::size_t max_points = kDefaultMaxGridPoints;
  bool spectrum_cache = false;
  std::string output_dir = "out";

  GasParameters gas;
  TailModel tail = TailModel::kNone;

  RandomPotentialSpec random;
  WeakPotentialSpec weak;

  GoodBoxConfig goodbox;
  IdsConfig ids;

  int levels_at(std::size_t scale_index) const;
  int kinetic_modes_at(std::size_t scale_index) const;
  void validate() const;
  // Stable text form of every field that affects results.
  std::string canonical() const;
  std::uint64_t hash() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string to_string(ModelKind kind);

}  // namespace bosloc

#endif  // BOSLOC_CONFIG_H_
