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

#ifndef BOSLOC_CONDENSATE_H_
#define BOSLOC_CONDENSATE_H_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "bosloc/bose_gas.h"
#include "bosloc/eigensolver.h"
#include "bosloc/grid.h"

namespace bosloc {

// Kinetic densities whose truncation residual exceeds this fraction of
// rho_bar are flagged.
inline constexpr double kTruncationWarningFraction = 0.01;

struct OverlapMatrix {
  // a(k, i) = (phi_i, psi_k)^2; rows are kinetic modes, columns levels.
  Eigen::MatrixXd a;
  std::vector<KineticMode> modes;
  std::vector<double> level_energies;

  Eigen::Index mode_count() const { return a.rows(); }
  Eigen::Index level_count() const { return a.cols(); }
};

OverlapMatrix overlap_matrix(const Spectrum& spectrum, const std::vector<KineticMode>& modes);

struct KineticOccupations {
  std::vector<double> densities;  // rho_k^kin = sum_i a_ki rho_i
  // (1 - sum_i a_ki) * rho_m: bound on the contribution of levels beyond
  // the computed ones.
  std::vector<double> truncation_residuals;
  double max_residual = 0.0;
  bool truncation_warning = false;
};

KineticOccupations kinetic_occupations(const OverlapMatrix& overlaps,
                                       const OccupationProfile& profile);

// rho_bar * sum_{i <= i0} (sup_mode_norm * V^{1/2} * l1_i)^2 + rho_{i0 + 1},
// 1-based, bounding every rho_k^kin. l1_metrics[i] is the normalised L1
// metric of phi_{i+1}. Requires 0 <= i0 < number of levels.
double type_iii_bound(const OccupationProfile& profile, std::span<const double> l1_metrics,
                      double sup_mode_norm, std::size_t i0, double rho_bar);

// Smallest bound over all admissible i0.
double best_type_iii_bound(const OccupationProfile& profile,
                           std::span<const double> l1_metrics, double sup_mode_norm,
                           double rho_bar);

}  // namespace bosloc

#endif  // BOSLOC_CONDENSATE_H_
