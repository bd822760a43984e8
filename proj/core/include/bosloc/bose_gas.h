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

#ifndef BOSLOC_BOSE_GAS_H_
#define BOSLOC_BOSE_GAS_H_

#include <span>
#include <string>
#include <vector>

#include "bosloc/eigensolver.h"

namespace bosloc {

struct GasParameters {
  double beta = 1.0;
  double rho_bar = 1.0;
  double lambda = 0.0;

  void validate() const;
};

enum class TailModel {
  kNone,  // levels above the computed ones carry no density
  kWeyl,  // continuum free density of states shifted by the mean potential
};

std::string to_string(TailModel model);
TailModel parse_tail_model(const std::string& name);

struct TailSpec {
  TailModel model = TailModel::kNone;
  double potential_mean = 0.0;
};

// Rejected when the tail carries more than this fraction of rho_bar.
inline constexpr double kMaxTailFraction = 0.1;
inline constexpr double kDensityTolerance = 1e-12;

struct OccupationProfile {
  double mu = 0.0;
  double mu_effective = 0.0;
  double volume = 1.0;
  GasParameters params;
  TailModel tail_model = TailModel::kNone;
  double tail_density = 0.0;
  std::vector<double> energies;
  std::vector<double> densities;  // rho_i = <N(phi_i)> / V

  double gap() const { return energies.front() - mu_effective; }
};

// rho_i = 1 / (V (exp(beta (E_i - mu_eff)) - 1)). Requires mu_eff < E_1.
std::vector<double> occupations(std::span<const double> energies, double volume,
                                double beta, double mu_effective);
std::vector<double> occupations(const Spectrum& spectrum, double beta, double mu_effective);

// Density carried by the Weyl tail above `cutoff` at the given mu_eff.
double weyl_tail_density(int dim, double cutoff, double potential_mean, double beta,
                         double mu_effective);

OccupationProfile solve_chemical_potential(std::span<const double> energies, double volume,
                                           int dim, const GasParameters& params,
                                           const TailSpec& tail = {});
OccupationProfile solve_chemical_potential(const Spectrum& spectrum,
                                           const GasParameters& params,
                                           const TailSpec& tail = {});

// Sum of rho_i over levels with E_i <= delta.
double condensate_band_density(std::span<const double> densities,
                               std::span<const double> energies, double delta);

}  // namespace bosloc

#endif  // BOSLOC_BOSE_GAS_H_
