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
#include <algorithm>
#include <numbers>

#include <gtest/gtest.h>

#include "bosloc/error.h"
#include "bosloc/grid.h"

namespace bosloc {
namespace {

TEST(Grid, SpacingSizeVolume1D) {
  const Grid g = build_grid(1, 4.0, 3);
  EXPECT_DOUBLE_EQ(g.spacing, 1.0);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g.volume(), 4.0);
  EXPECT_DOUBLE_EQ(g.coordinate(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(g.coordinate(2, 0), 1.0);
}

TEST(Grid, SpacingSizeVolume2D) {
  const Grid g = build_grid(2, 8.0, 7);
  EXPECT_DOUBLE_EQ(g.spacing, 1.0);
  EXPECT_EQ(g.size(), 49u);
  EXPECT_DOUBLE_EQ(g.volume(), 64.0);
  EXPECT_DOUBLE_EQ(g.cell_measure(), 1.0);
}

TEST(Grid, RejectsBadArguments) {
  EXPECT_THROW(build_grid(1, 4.0, 0), InvalidArgument);
  EXPECT_THROW(build_grid(0, 4.0, 3), InvalidArgument);
  EXPECT_THROW(build_grid(4, 4.0, 3), InvalidArgument);
  EXPECT_THROW(build_grid(1, -1.0, 3), InvalidArgument);
  EXPECT_THROW(build_grid(3, 4.0, 200, 1000), InvalidArgument);
}

TEST(Grid, ResolutionRequiresIntegerCellCount) {
  const Grid g = grid_with_resolution(1, 64.0, 16);
  EXPECT_EQ(g.points_per_side, 1023);
  EXPECT_DOUBLE_EQ(g.resolution(), 16.0);
  EXPECT_THROW(grid_with_resolution(1, 2.5, 3), InvalidArgument);
}

TEST(Grid, FlattenRoundTrip) {
  const Grid g = build_grid(3, 4.0, 5);
  for (std::size_t f = 0; f < g.size(); ++f) EXPECT_EQ(g.flatten(g.unflatten(f)), f);
  EXPECT_EQ(g.flatten({1, 0, 0}), 1u);  // axis 0 fastest
  EXPECT_EQ(g.flatten({0, 1, 0}), 5u);
}

TEST(Grid, SubGridEmbedsOnParentNodes) {
  const Grid parent = build_grid(1, 16.0, 31);
  const Grid sub = sub_grid(parent, {2.0, 0.0, 0.0}, 5.0);
  EXPECT_DOUBLE_EQ(sub.spacing, parent.spacing);
  const auto idx = embed_indices(parent, sub);
  ASSERT_EQ(idx.size(), sub.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_NEAR(parent.coordinate(static_cast<int>(idx[i]), 0),
                sub.coordinate(static_cast<int>(i), 0), 1e-12);
  }
}

TEST(Grid, Norms) {
  const Grid g = build_grid(1, 4.0, 3);
  const std::vector<double> u = {1.0, -2.0, 2.0};
  EXPECT_DOUBLE_EQ(inner(g, u, u), 9.0);
  EXPECT_DOUBLE_EQ(norm_l2(g, u), 3.0);
  EXPECT_DOUBLE_EQ(norm_l1(g, u), 5.0);
  EXPECT_DOUBLE_EQ(norm_sup(u), 2.0);
}

TEST(KineticModes, SmallestMode1D) {
  const Grid g = build_grid(1, 4.0, 3);
  const auto modes = kinetic_modes(g, 1);
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_NEAR(modes[0].energy, 2.0 * std::pow(std::sin(std::numbers::pi / 8.0), 2), 1e-15);
  EXPECT_NEAR(modes[0].energy, 0.2928932, 1e-7);
}

TEST(KineticModes, ThreeModesOrthonormal) {
  const Grid g = build_grid(1, 4.0, 3);
  const auto modes = kinetic_modes(g, 3);
  ASSERT_EQ(modes.size(), 3u);
  EXPECT_NEAR(modes[0].energy, 0.29289321881345248, 1e-12);
  EXPECT_NEAR(modes[1].energy, 1.0, 1e-12);
  EXPECT_NEAR(modes[2].energy, 1.70710678118654752, 1e-12);
  for (int a = 0; a < 3; ++a) {
    const auto ua = kinetic_mode_values(g, modes[a]);
    for (int b = 0; b < 3; ++b) {
      const auto ub = kinetic_mode_values(g, modes[b]);
      EXPECT_NEAR(inner(g, ua, ub), a == b ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(KineticModes, TensorSum2D) {
  const Grid g = build_grid(2, 4.0, 3);
  const auto modes = kinetic_modes(g, 3);
  EXPECT_NEAR(modes[0].energy, 0.5857864, 1e-7);
  EXPECT_NEAR(modes[1].energy, modes[2].energy, 1e-14);  // (1,2) and (2,1)
  EXPECT_EQ(modes[0].index[0], 1);
  EXPECT_EQ(modes[0].index[1], 1);
  EXPECT_EQ(modes[0].index[2], 0);
}

TEST(KineticModes, AscendingAndCountChecked) {
  const Grid g = build_grid(2, 6.0, 5);
  EXPECT_THROW(kinetic_modes(g, 100), InvalidArgument);
  EXPECT_THROW(kinetic_modes(g, 0), InvalidArgument);
  const auto modes = kinetic_modes(g, g.size());
  EXPECT_EQ(modes.size(), g.size());
  for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_LE(modes[i - 1].energy, modes[i].energy);
}

TEST(KineticModes, SupBoundHolds) {
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g = build_grid(dim, 5.0, 9);
    const double bound = kinetic_sup_bound(g);
    EXPECT_NEAR(bound, std::pow(2.0 / 5.0, dim / 2.0), 1e-15);
    for (const auto& m : kinetic_modes(g, std::min<std::size_t>(20, g.size()))) {
      EXPECT_LE(norm_sup(kinetic_mode_values(g, m)), bound + 1e-12);
    }
  }
}

}  // namespace
}  // namespace bosloc
