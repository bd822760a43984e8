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

#include "bosloc/condensate.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "bosloc/error.h"

namespace bosloc {

OverlapMatrix overlap_matrix(const Spectrum& spectrum, const std::vector<KineticMode>& modes) {
  const Grid& grid = spectrum.grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (spectrum.eigenfunctions.rows() != n) throw InvalidArgument("spectrum grid mismatch");
  Eigen::MatrixXd psi(n, static_cast<Eigen::Index>(modes.size()));
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const std::vector<double> values = kinetic_mode_values(grid, modes[k]);
    psi.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
  }
  OverlapMatrix out;
  out.a = (grid.cell_measure() * (psi.transpose() * spectrum.eigenfunctions)).array().square();
  out.modes = modes;
  out.level_energies = spectrum.energies;
  return out;
}

KineticOccupations kinetic_occupations(const OverlapMatrix& overlaps,
                                       const OccupationProfile& profile) {
  const auto m = overlaps.level_count();
  if (static_cast<std::size_t>(m) > profile.densities.size()) {
    throw InvalidArgument("occupation profile does not cover every overlap level");
  }
  const Eigen::Map<const Eigen::VectorXd> rho(profile.densities.data(), m);
  const Eigen::VectorXd kin = overlaps.a * rho;
  const Eigen::VectorXd coverage = overlaps.a.rowwise().sum();
  // Levels beyond the profile (or beyond the overlap columns) are no more
  // occupied than the last covered one.
  const double rho_last = m > 0 ? rho(m - 1) : 0.0;
  KineticOccupations out;
  out.densities.assign(kin.data(), kin.data() + kin.size());
  out.truncation_residuals.resize(static_cast<std::size_t>(kin.size()));
  for (Eigen::Index k = 0; k < kin.size(); ++k) {
    const double r = std::max(0.0, 1.0 - coverage(k)) * rho_last;
    out.truncation_residuals[static_cast<std::size_t>(k)] = r;
    out.max_residual = std::max(out.max_residual, r);
  }
  out.truncation_warning =
      out.max_residual > kTruncationWarningFraction * profile.params.rho_bar;
  return out;
}

double type_iii_bound(const OccupationProfile& profile, std::span<const double> l1_metrics,
                      double sup_mode_norm, std::size_t i0, double rho_bar) {
  if (i0 >= profile.densities.size()) {
    throw InvalidArgument(fmt::format("i0 = {} leaves no remainder level", i0));
  }
  if (i0 > l1_metrics.size()) throw InvalidArgument("not enough L1 metrics for i0");
  const double root_volume = std::sqrt(profile.volume);
  double sum = 0.0;
  for (std::size_t i = 0; i < i0; ++i) {
    const double overlap_bound = sup_mode_norm * root_volume * l1_metrics[i];
    sum += overlap_bound * overlap_bound;
  }
  return rho_bar * sum + profile.densities[i0];
}

double best_type_iii_bound(const OccupationProfile& profile,
                           std::span<const double> l1_metrics, double sup_mode_norm,
                           double rho_bar) {
  const std::size_t limit = std::min(profile.densities.size(), l1_metrics.size() + 1);
  double best = profile.densities.front();
  for (std::size_t i0 = 1; i0 < limit; ++i0) {
    best = std::min(best, type_iii_bound(profile, l1_metrics, sup_mode_norm, i0, rho_bar));
  }
  return best;
}

}  // namespace bosloc
