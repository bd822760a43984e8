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

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "bosloc/eigensolver.h"
#include "bosloc/error.h"
#include "bosloc/hamiltonian.h"
#include "bosloc/localization.h"
#include "bosloc/potential.h"
#include "bosloc/resolvent.h"

namespace bosloc {
namespace {

PotentialField random_field(const Grid& g, std::uint64_t seed, double a) {
  RandomPotentialSpec s;
  s.seed = seed;
  s.strengths.a = a;
  return sample_random_potential(s, g, 0);
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Largest singular value of the explicit block of (H - E)^{-1}.
double dense_block_norm(const SymmetricOperator& op, double energy,
                        const std::vector<std::size_t>& in, const std::vector<std::size_t>& out) {
  const Eigen::MatrixXd h = op.to_dense();
  const Eigen::Index n = h.rows();
  const Eigen::MatrixXd r =
      (h - energy * Eigen::MatrixXd::Identity(n, n)).fullPivLu().inverse();
  Eigen::MatrixXd block(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(in.size()));
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t b = 0; b < in.size(); ++b) {
      block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          r(static_cast<Eigen::Index>(out[a]), static_cast<Eigen::Index>(in[b]));
    }
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(block).singularValues()(0);
}

TEST(Resolvent, DistanceToSpectrum) {
  const Grid g = grid_with_resolution(1, 16.0, 4);
  const auto op = assemble_hamiltonian(g, random_field(g, 1, 1.0));
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(op.to_dense()).eigenvalues();
  for (double e : {-1.0, 0.3, 1.7}) {
    const double expected = (ev.array() - e).abs().minCoeff();
    EXPECT_NEAR(distance_to_spectrum(op, e), expected, 1e-8 * std::max(1.0, expected));
  }
}

TEST(Resolvent, BelowSpectrumBound) {
  const Grid g = grid_with_resolution(1, 16.0, 4);
  const auto op = assemble_hamiltonian(g, random_field(g, 2, 1.0));
  const double e1 = lowest_eigenpairs(op, 1, 1e-12).energies[0];
  ResolventBlockQuery q{&op, -1.0, {0, 1, 2, 3}, {40, 41, 42}};
  EXPECT_LE(resolvent_block_norm(q), 1.0 / (e1 + 1.0) * (1.0 + 1e-6));
}

TEST(Resolvent, FullMasksGiveInverseDistance) {
  const Grid g = grid_with_resolution(1, 16.0, 4);
  const auto op = assemble_hamiltonian(g, random_field(g, 3, 1.0));
  const auto full = all_indices(g.size());
  for (double e : {-0.5, 0.2, 0.9}) {
    ResolventBlockQuery q{&op, e, full, full};
    const double d = distance_to_spectrum(op, e);
    EXPECT_NEAR(resolvent_block_norm(q) * d, 1.0, 1e-6);
  }
}

TEST(Resolvent, MatchesDenseSvdOnSubBoxes) {
  // Ten instances: sub-boxes of side 9 inside a strongly disordered parent,
  // probed at the parent ground energy.
  for (int inst = 0; inst < 10; ++inst) {
    const Grid parent = grid_with_resolution(1, 32.0, 4);
    const auto field = random_field(parent, 100 + inst, 10.0);
    const double e1 = lowest_eigenpairs(assemble_hamiltonian(parent, field), 1, 1e-12).energies[0];
    const BoxMasks masks = good_box_masks(parent, {inst - 5, 0, 0}, 9);
    const auto sub = restrict_potential(field, masks.box);
    const auto op = assemble_hamiltonian(masks.box, sub);
    ResolventBlockQuery q{&op, e1, masks.interior, masks.collar};
    const double expected = dense_block_norm(op, e1, masks.interior, masks.collar);
    EXPECT_NEAR(resolvent_block_norm(q), expected, 1e-6 * expected) << "instance " << inst;
  }
}

TEST(Resolvent, CollisionThrowsAndShiftRecovers) {
  const Grid g = build_grid(1, 4.0, 3);
  const auto op = assemble_hamiltonian(g, constant_potential(g, 0.0));
  ResolventBlockQuery q{&op, 1.0, {0}, {2}};  // E equals the second eigenvalue
  EXPECT_THROW(resolvent_block_norm(q), SpectralCollision);
  const ShiftedNorm s = resolvent_block_norm_shifted(q);
  EXPECT_DOUBLE_EQ(s.eps_shift, kDefaultEpsShift);
  EXPECT_DOUBLE_EQ(s.energy, 1.0 + kDefaultEpsShift);
  EXPECT_NEAR(s.norm, dense_block_norm(op, s.energy, {0}, {2}), 1e-6 * s.norm);
}

TEST(Resolvent, NoShiftAwayFromSpectrum) {
  const Grid g = build_grid(1, 4.0, 3);
  const auto op = assemble_hamiltonian(g, constant_potential(g, 0.0));
  ResolventBlockQuery q{&op, 0.5, {0, 1}, {1, 2}};
  const ShiftedNorm s = resolvent_block_norm_shifted(q);
  EXPECT_EQ(s.eps_shift, 0.0);
  EXPECT_NEAR(s.norm, dense_block_norm(op, 0.5, {0, 1}, {1, 2}), 1e-6 * s.norm);
}

TEST(Resolvent, RejectsBadMasks) {
  const Grid g = build_grid(1, 4.0, 3);
  const auto op = assemble_hamiltonian(g, constant_potential(g, 0.0));
  EXPECT_EQ(resolvent_block_norm({&op, 0.5, {}, {1}}), 0.0);
  EXPECT_THROW(resolvent_block_norm({&op, 0.5, {0, 0}, {1}}), InvalidArgument);
  EXPECT_THROW(resolvent_block_norm({&op, 0.5, {0}, {3}}), InvalidArgument);
  EXPECT_THROW(resolvent_block_norm({nullptr, 0.5, {0}, {1}}), InvalidArgument);
}

}  // namespace
}  // namespace bosloc
