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
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "bosloc/banded.h"
#include "bosloc/eigensolver.h"
#include "bosloc/error.h"
#include "bosloc/hamiltonian.h"
#include "bosloc/potential.h"

namespace bosloc {
namespace {

EigenOptions with_method(SolverMethod m) {
  EigenOptions o;
  o.method = m;
  return o;
}

PotentialField random_field(const Grid& g, std::uint64_t seed, double a = 1.0) {
  RandomPotentialSpec s;
  s.seed = seed;
  s.strengths.a = a;
  return sample_random_potential(s, g, 0);
}

// Largest principal angle between the column spaces of two orthonormal bases.
double subspace_angle(const Grid& g, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd c = g.cell_measure() * (a.transpose() * b);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  return std::acos(std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0));
}

TEST(Hamiltonian, DenseMatchesApply) {
  const Grid g = grid_with_resolution(2, 3.0, 3);
  const auto op = assemble_hamiltonian(g, random_field(g, 1));
  const Eigen::MatrixXd dense = op.to_dense();
  EXPECT_TRUE(dense.isApprox(dense.transpose()));
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(g.size()), 3);
  Eigen::MatrixXd y(x.rows(), x.cols());
  op.apply(x, y, 0.25);
  const Eigen::MatrixXd expected =
      dense * x - 0.25 * x;
  EXPECT_LT((y - expected).norm(), 1e-12 * expected.norm());
  EXPECT_EQ(op.bandwidth(), static_cast<std::size_t>(g.points_per_side));
  EXPECT_DOUBLE_EQ(op.coupling(), -0.5 / (g.spacing * g.spacing));
}

TEST(Hamiltonian, RejectsMismatchedPotential) {
  const Grid g = build_grid(1, 4.0, 3);
  EXPECT_THROW(SymmetricOperator(g, std::vector<double>(4, 0.0)), InvalidArgument);
}

TEST(Banded, CholeskyAndLuSolve) {
  const Grid g = grid_with_resolution(2, 3.0, 4);
  const auto op = assemble_hamiltonian(g, random_field(g, 2));
  const Eigen::MatrixXd dense = op.to_dense();
  const Eigen::Index n = dense.rows();
  const Eigen::MatrixXd b = Eigen::MatrixXd::Random(n, 2);
  Eigen::MatrixXd x = b;
  BandedCholesky(op, -1.0).solve(x);
  const Eigen::MatrixXd shifted = dense + Eigen::MatrixXd::Identity(n, n);
  EXPECT_LT((shifted * x - b).norm(), 1e-10 * b.norm());
  // Indefinite shift inside the spectrum needs the LU path.
  Eigen::MatrixXd y = b;
  BandedLU(op, 7.3).solve(y);
  const Eigen::MatrixXd indef = dense - 7.3 * Eigen::MatrixXd::Identity(n, n);
  EXPECT_LT((indef * y - b).norm(), 1e-9 * b.norm());
}

TEST(Eigensolver, FreeSpectrumSmallGrid) {
  const Grid g = build_grid(1, 4.0, 3);
  const auto op = assemble_hamiltonian(g, constant_potential(g, 0.0));
  const Spectrum s = lowest_eigenpairs(op, 3, 1e-12);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s.energies[0], 0.29289321881345248, 1e-12);
  EXPECT_NEAR(s.energies[1], 1.0, 1e-12);
  EXPECT_NEAR(s.energies[2], 1.70710678118654752, 1e-12);
}

TEST(Eigensolver, ConstantShift) {
  const Grid g = grid_with_resolution(1, 4.0, 4);
  const auto s0 = lowest_eigenpairs(assemble_hamiltonian(g, constant_potential(g, 0.0)), 5, 1e-12);
  const auto s7 = lowest_eigenpairs(assemble_hamiltonian(g, constant_potential(g, 7.0)), 5, 1e-12);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(s7.energies[i], s0.energies[i] + 7.0, 1e-12);
    for (Eigen::Index r = 0; r < s0.eigenfunctions.rows(); ++r) {
      EXPECT_NEAR(s7.eigenfunctions(r, i), s0.eigenfunctions(r, i), 1e-10);
    }
  }
}

TEST(Eigensolver, ThreeByThreeCharacteristicRoot) {
  // H = [[1,-1/2,0],[-1/2,6,-1/2],[0,-1/2,1]]: lowest root of the characteristic
  // polynomial is (7 - 3 sqrt 3) / 2.
  const Grid g = build_grid(1, 4.0, 3);
  const auto op = assemble_hamiltonian(g, explicit_potential(g, {0.0, 5.0, 0.0}));
  const Spectrum s = lowest_eigenpairs(op, 1, 1e-12);
  EXPECT_NEAR(s.energies[0], (7.0 - 3.0 * std::sqrt(3.0)) / 2.0, 1e-13);
}

TEST(Eigensolver, FreeSpectrum2DMatchesTensorModes) {
  const Grid g = build_grid(2, 8.0, 15);
  const auto op = assemble_hamiltonian(g, constant_potential(g, 0.0));
  const auto modes = kinetic_modes(g, 12);
  for (auto method : {SolverMethod::kDense, SolverMethod::kIterative}) {
    const Spectrum s = lowest_eigenpairs(op, 12, 1e-11, with_method(method));
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(s.energies[i], modes[i].energy, 1e-10);
  }
}

TEST(Eigensolver, IterativeMatchesDenseOnRandomField) {
  const Grid g = build_grid(1, 64.0, 1023);
  const auto op = assemble_hamiltonian(g, random_field(g, 42));
  const Spectrum dense = lowest_eigenpairs(op, 8, 1e-10, with_method(SolverMethod::kDense));
  const Spectrum iter = lowest_eigenpairs(op, 8, 1e-10, with_method(SolverMethod::kIterative));
  // Independent dense route through Eigen.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(op.to_dense());
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(dense.energies[i], oracle.eigenvalues()[i], 1e-10);
    EXPECT_NEAR(iter.energies[i], oracle.eigenvalues()[i], 1e-8);
    EXPECT_LE(iter.residuals[i], 1e-10 * std::max(1.0, iter.energies[7]));
  }
  EXPECT_LT(subspace_angle(g, dense.eigenfunctions, iter.eigenfunctions), 1e-6);
}

TEST(Eigensolver, EigenfunctionsOrthonormalAndSigned) {
  const Grid g = grid_with_resolution(1, 32.0, 8);
  const auto op = assemble_hamiltonian(g, random_field(g, 5));
  for (auto method : {SolverMethod::kDense, SolverMethod::kIterative}) {
    const Spectrum s = lowest_eigenpairs(op, 10, 1e-10, with_method(method));
    const Eigen::MatrixXd gram =
        g.cell_measure() * (s.eigenfunctions.transpose() * s.eigenfunctions);
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(10, 10)).norm(), 1e-10);
    for (int i = 0; i < 10; ++i) {
      // First non-negligible entry is positive.
      const auto col = s.eigenfunctions.col(i);
      const double scale = col.cwiseAbs().maxCoeff();
      Eigen::Index first = 0;
      while (std::abs(col(first)) <= 1e-10 * scale) ++first;
      EXPECT_GT(col(first), 0.0);
      EXPECT_NEAR(eigen_residual(op, s.eigenfunction(i), s.energies[i]), s.residuals[i],
                  1e-12 + 1e-6 * s.residuals[i]);
    }
  }
}

TEST(Eigensolver, DeterministicAcrossCalls) {
  const Grid g = grid_with_resolution(1, 128.0, 16);
  const auto op = assemble_hamiltonian(g, random_field(g, 11));
  const auto a = lowest_eigenpairs(op, 20, 1e-9, with_method(SolverMethod::kIterative));
  const auto b = lowest_eigenpairs(op, 20, 1e-9, with_method(SolverMethod::kIterative));
  EXPECT_EQ(a.energies, b.energies);
  EXPECT_TRUE(a.eigenfunctions == b.eigenfunctions);
}

TEST(Eigensolver, RejectsBadCounts) {
  const Grid g = build_grid(1, 4.0, 3);
  const auto op = assemble_hamiltonian(g, constant_potential(g, 0.0));
  EXPECT_THROW(lowest_eigenpairs(op, 0, 1e-10), InvalidArgument);
  EXPECT_THROW(lowest_eigenpairs(op, 4, 1e-10), InvalidArgument);
  EXPECT_THROW(lowest_eigenpairs(op, 1, 0.0), InvalidArgument);
}

TEST(Eigensolver, IterationBudgetExhaustionIsNumericalError) {
  const Grid g = grid_with_resolution(1, 64.0, 16);
  const auto op = assemble_hamiltonian(g, random_field(g, 3));
  EigenOptions o = with_method(SolverMethod::kIterative);
  o.max_iterations = 1;
  EXPECT_THROW(lowest_eigenpairs(op, 16, 1e-12, o), NumericalError);
}

}  // namespace
}  // namespace bosloc
