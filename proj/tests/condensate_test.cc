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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "bosloc/bose_gas.h"
#include "bosloc/condensate.h"
#include "bosloc/eigensolver.h"
#include "bosloc/error.h"
#include "bosloc/hamiltonian.h"
#include "bosloc/localization.h"
#include "bosloc/potential.h"

namespace bosloc {
namespace {

Spectrum full_spectrum(const PotentialField& field) {
  EigenOptions o;
  o.method = SolverMethod::kDense;
  return lowest_eigenpairs(assemble_hamiltonian(field.grid, field), field.grid.size(), 1e-10, o);
}

PotentialField strong_disorder(const Grid& g, std::uint64_t seed) {
  RandomPotentialSpec s;
  s.seed = seed;
  s.strengths.a = 20.0;
  return sample_random_potential(s, g, 0);
}

TEST(Overlap, FreeOperatorGivesIdentity) {
  const Grid g = grid_with_resolution(1, 8.0, 4);
  for (double c : {0.0, 2.5}) {
    const Spectrum s = full_spectrum(constant_potential(g, c));
    const auto ov = overlap_matrix(s, kinetic_modes(g, g.size()));
    const auto n = static_cast<Eigen::Index>(g.size());
    EXPECT_LT((ov.a - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Overlap, FullMatrixDoublyStochastic) {
  const Grid g = grid_with_resolution(1, 32.0, 4);
  const Spectrum s = full_spectrum(strong_disorder(g, 5));
  const auto ov = overlap_matrix(s, kinetic_modes(g, g.size()));
  EXPECT_LT((ov.a.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_LT((ov.a.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_GE(ov.a.minCoeff(), 0.0);
}

TEST(KineticOccupations, IdentityOverlapsReproduceDensities) {
  const Grid g = grid_with_resolution(1, 8.0, 4);
  const Spectrum s = full_spectrum(constant_potential(g, 0.0));
  const auto profile = solve_chemical_potential(s, {2.0, 1.0, 0.0});
  const auto kin = kinetic_occupations(overlap_matrix(s, kinetic_modes(g, g.size())), profile);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(kin.densities[k], profile.densities[k], 1e-12);
  }
  EXPECT_LT(kin.max_residual, 1e-10);
  EXPECT_FALSE(kin.truncation_warning);
}

TEST(KineticOccupations, TraceIdentity) {
  const Grid g = grid_with_resolution(1, 16.0, 8);
  const Spectrum s = full_spectrum(strong_disorder(g, 6));
  const auto profile = solve_chemical_potential(s, {3.0, 2.0, 0.0});
  const auto kin = kinetic_occupations(overlap_matrix(s, kinetic_modes(g, g.size())), profile);
  const double total = std::accumulate(kin.densities.begin(), kin.densities.end(), 0.0);
  EXPECT_NEAR(total, 2.0, 1e-10);
}

TEST(KineticOccupations, TruncationResidualFlagged) {
  const Grid g = grid_with_resolution(1, 32.0, 4);
  const auto field = strong_disorder(g, 7);
  const Spectrum s = lowest_eigenpairs(assemble_hamiltonian(g, field), 4, 1e-10);
  const auto profile = solve_chemical_potential(s, {0.1, 2.0, 0.0});
  const auto kin = kinetic_occupations(overlap_matrix(s, kinetic_modes(g, 4)), profile);
  EXPECT_GT(kin.max_residual, 0.0);
  EXPECT_EQ(kin.truncation_warning, kin.max_residual > kTruncationWarningFraction * 2.0);
}

TEST(TypeIII, EmptyFirstBlockIsGroundDensity) {
  OccupationProfile p;
  p.volume = 4.0;
  p.densities = {0.7, 0.2, 0.1};
  const std::vector<double> l1 = {0.5, 0.5};
  EXPECT_DOUBLE_EQ(type_iii_bound(p, l1, 0.5, 0, 1.0), 0.7);
  // i0 = 1: rho_bar (0.5 * 2 * 0.5)^2 + rho_2.
  EXPECT_DOUBLE_EQ(type_iii_bound(p, l1, 0.5, 1, 1.0), 0.25 + 0.2);
  EXPECT_DOUBLE_EQ(best_type_iii_bound(p, l1, 0.5, 1.0), 0.45);
  EXPECT_THROW(type_iii_bound(p, l1, 0.5, 3, 1.0), InvalidArgument);
}

TEST(TypeIII, DominatesKineticDensities) {
  for (double a : {0.0, 1.0, 20.0}) {
    const Grid g = grid_with_resolution(1, 32.0, 8);
    RandomPotentialSpec rs;
    rs.seed = 3;
    rs.strengths.a = a;
    const auto field = sample_random_potential(rs, g, 0);
    const Spectrum s = lowest_eigenpairs(assemble_hamiltonian(g, field), 16, 1e-10);
    const auto profile = solve_chemical_potential(s, {10.0, 2.0, 0.0});
    const auto kin = kinetic_occupations(overlap_matrix(s, kinetic_modes(g, 16)), profile);
    const auto report = localization_report(s, 16);
    std::vector<double> l1;
    for (const auto& e : report.entries) l1.push_back(e.l1_metric);
    const double sup = kinetic_sup_bound(g);
    for (std::size_t i0 = 0; i0 < 16; ++i0) {
      const double bound = type_iii_bound(profile, l1, sup, i0, 2.0);
      for (double rho : kin.densities) EXPECT_LE(rho, bound + 1e-10) << "a = " << a;
    }
  }
}

}  // namespace
}  // namespace bosloc
