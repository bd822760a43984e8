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

#ifndef BOSLOC_FOCK_ORACLE_H_
#define BOSLOC_FOCK_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace bosloc {

inline constexpr int kOracleMaxLevels = 6;
inline constexpr int kOracleMaxParticles = 200;
inline constexpr double kOracleTailTolerance = 1e-10;

enum class InteractionKind {
  kMeanField,  // a_ij = 1: (lambda / 2V) N^2
  kSelf,       // a_ij = delta_ij: (lambda / 2V) sum_i N_i^2
  kCustom,
};

std::string to_string(InteractionKind kind);
InteractionKind parse_interaction_kind(const std::string& name);

// H(n) = sum_i (E_i - mu) n_i + (lambda / 2V) sum_ij a_ij n_i n_j on
// occupation tuples with sum n_i <= n_max.
struct DiagonalModelSpec {
  std::vector<double> energies;
  double beta = 1.0;
  double mu = 0.0;
  double lambda = 0.0;
  double volume = 1.0;
  InteractionKind interaction = InteractionKind::kMeanField;
  // Row-major m x m, used only for kCustom. Symmetric, entries >= 0.
  std::vector<double> custom_matrix;
  int n_max = 60;

  std::size_t levels() const { return energies.size(); }
  double a(std::size_t i, std::size_t j) const;
  void validate() const;
  std::uint64_t hash() const;
};

struct GibbsResult {
  double log_partition = 0.0;  // ln Z, finite even when Z overflows
  double partition_value = 0.0;
  std::vector<double> mean_occupations;
  double mean_total = 0.0;
  double mean_square_total = 0.0;
  // Rigorous upper bound on (discarded weight) / Z.
  double tail_bound = 0.0;
  std::uint64_t states = 0;
};

// Throws NumericalError when tail_bound >= kOracleTailTolerance.
GibbsResult enumerate_gibbs(const DiagonalModelSpec& spec);

// Bound on the weight of configurations with N > n_max relative to Z.
double truncation_tail_bound(const DiagonalModelSpec& spec, double min_energy,
                             double log_partition_shifted);

struct MonotonicityEntry {
  std::uint64_t spec_hash = 0;
  std::vector<double> occupations;
  double margin = 0.0;  // min_i (<N_i> - <N_{i+1}>)
  double tail_bound = 0.0;
  bool monotone = true;
};

struct MonotonicityReport {
  std::vector<MonotonicityEntry> entries;
  int violations = 0;
  double min_margin = 0.0;
};

// Energies must be ascending. Violations in kMeanField or kSelf specs throw
// NumericalError when `enforce` is set; kCustom specs are only reported.
MonotonicityReport monotonicity_certificate(const std::vector<DiagonalModelSpec>& specs,
                                            bool enforce = true);

// Random specs with ascending energies in [0, 1), beta in [0.5, 5],
// lambda in [0, 3] and E_1 - mu = (1 + u) / beta. n_max starts at 60 and
// grows (up to the cap) until the tail certificate holds.
std::vector<DiagonalModelSpec> random_diagonal_sweep(int count, int levels, std::uint64_t seed,
                                                     InteractionKind kind);

}  // namespace bosloc

#endif  // BOSLOC_FOCK_ORACLE_H_
