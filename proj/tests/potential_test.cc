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
#include <map>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "bosloc/error.h"
#include "bosloc/philox.h"
#include "bosloc/potential.h"

namespace bosloc {
namespace {

RandomPotentialSpec uniform_spec(std::uint64_t seed, double a = 1.0) {
  RandomPotentialSpec s;
  s.seed = seed;
  s.strengths.a = a;
  return s;
}

TEST(Philox, KnownAnswerZeroCounterZeroKey) {
  const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, UniformInUnitInterval) {
  PhiloxStream s(5, 1);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
}

TEST(RandomPotential, IndicatorValuesConstantPerCell) {
  const Grid g = grid_with_resolution(1, 16.0, 8);
  const auto field = sample_random_potential(uniform_spec(3), g, 0);
  std::map<int, double> per_cell;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double v = field.values[f];
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    const int cell = static_cast<int>(std::floor(g.coordinate(static_cast<int>(f), 0) + 0.5));
    const auto [it, inserted] = per_cell.emplace(cell, v);
    if (!inserted) {
      EXPECT_EQ(it->second, v);
    }
  }
  EXPECT_GE(per_cell.size(), 16u);
}

TEST(RandomPotential, DegenerateDistributionGivesZero) {
  const Grid g = grid_with_resolution(2, 4.0, 4);
  const auto field = sample_random_potential(uniform_spec(9, 0.0), g, 2);
  for (double v : field.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(uniform_spec(9, 0.0).bound(), 0.0);
}

TEST(RandomPotential, DeterministicRegeneration) {
  const Grid g = grid_with_resolution(1, 8.0, 16);
  const auto a = sample_random_potential(uniform_spec(42), g, 0);
  const auto b = sample_random_potential(uniform_spec(42), g, 0);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.provenance_hash(), b.provenance_hash());
  const auto c = sample_random_potential(uniform_spec(42), g, 1);
  EXPECT_NE(a.values, c.values);
  EXPECT_NE(a.provenance_hash(), c.provenance_hash());
}

TEST(RandomPotential, SharedCellsAcrossScales) {
  // The same physical cell keeps its strength when the box grows.
  const auto spec = uniform_spec(17);
  const Grid small = grid_with_resolution(1, 8.0, 4);
  const Grid large = grid_with_resolution(1, 16.0, 4);
  const auto fs = sample_random_potential(spec, small, 3);
  const auto fl = sample_random_potential(spec, large, 3);
  const auto idx = embed_indices(large, small);
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(fs.values[i], fl.values[idx[i]]);
}

TEST(RandomPotential, CosineBumpWithinBound) {
  RandomPotentialSpec s = uniform_spec(4, 2.0);
  s.profile = {ProfileShape::kCosineBump, 0.5, 1.5};
  const Grid g = grid_with_resolution(2, 6.0, 8);
  const auto field = sample_random_potential(s, g, 0);
  for (double v : field.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, s.bound());
  }
}

TEST(RandomPotential, RejectsInvalidSpecs) {
  const Grid g = grid_with_resolution(1, 4.0, 4);
  RandomPotentialSpec s = uniform_spec(1, -1.0);
  EXPECT_THROW(sample_random_potential(s, g, 0), InvalidArgument);
  s = uniform_spec(1);
  s.profile.floor = 0.0;
  EXPECT_THROW(sample_random_potential(s, g, 0), InvalidArgument);
}

TEST(StrengthDistribution, HolderExponent) {
  EXPECT_EQ(StrengthDistribution{1.0}.holder_exponent(), 1.0);
  EXPECT_EQ(StrengthDistribution{3.0}.holder_exponent(), 1.0);
  EXPECT_FALSE(StrengthDistribution{0.5}.holder_exponent().has_value());
  EXPECT_FALSE(StrengthDistribution{0.0}.holder_exponent().has_value());
}

WeakPotentialSpec centred_quadratic() {
  WeakPotentialSpec s;
  s.dim = 1;
  s.zeros = {WeakZero{{0.5, 0.5, 0.5}, 2.0, 1.0}};
  return s;
}

TEST(WeakPotential, QuadraticNearCentre) {
  const Grid g = build_grid(1, 10.0, 9);  // nodes at integer x in [-4, 4]
  const auto field = evaluate_weak_potential(centred_quadratic(), g);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double x = g.coordinate(static_cast<int>(f), 0);
    EXPECT_NEAR(field.values[f], (x / 10.0) * (x / 10.0), 1e-15);
  }
  EXPECT_EQ(field.values[4], 0.0);
}

TEST(WeakPotential, ScalingIdentity) {
  const auto spec = centred_quadratic();
  const Grid g1 = build_grid(1, 8.0, 15);
  const Grid g2 = build_grid(1, 16.0, 31);
  const auto v1 = evaluate_weak_potential(spec, g1);
  const auto v2 = evaluate_weak_potential(spec, g2);
  // Node m of g1 sits at x; node 2m+1 of g2 sits at 2x.
  for (int m = 0; m < 15; ++m) EXPECT_NEAR(v1.values[m], v2.values[2 * m + 1], 1e-15);
}

TEST(WeakPotential, MinimumApproachesZeroOnRefinement) {
  WeakPotentialSpec s;
  s.dim = 1;
  s.zeros = {WeakZero{{0.3, 0.5, 0.5}, 2.0, 1.0}};
  double previous = INFINITY;
  for (int ppu : {1, 2, 4, 8, 16, 32}) {
    const Grid g = grid_with_resolution(1, 10.0, ppu);
    const auto field = evaluate_weak_potential(s, g);
    const double vmin = potential_stats(field).min;
    // Grid node nearest to the zero at physical x = 10 (0.3 - 0.5) = -2.
    int nearest = 0;
    for (int m = 0; m < g.points_per_side; ++m) {
      if (std::abs(g.coordinate(m, 0) + 2.0) < std::abs(g.coordinate(nearest, 0) + 2.0)) {
        nearest = m;
      }
    }
    EXPECT_LE(vmin, field.values[nearest]);
    EXPECT_LE(vmin, previous);
    previous = vmin;
  }
  EXPECT_LT(previous, 1e-6);
}

TEST(WeakPotential, RejectsZeroOutsideCube) {
  WeakPotentialSpec s = centred_quadratic();
  s.zeros[0].y[0] = 1.0;
  EXPECT_THROW(evaluate_weak_potential(s, build_grid(1, 4.0, 3)), InvalidArgument);
}

TEST(PotentialStats, IndicatorIntegral) {
  const Grid g = grid_with_resolution(1, 4.0, 4);
  const auto stats = potential_stats(sample_random_potential(uniform_spec(2), g, 0));
  ASSERT_TRUE(stats.single_site_integral.has_value());
  EXPECT_DOUBLE_EQ(*stats.single_site_integral, 1.0);
}

TEST(PotentialStats, ZeroPotential) {
  const auto stats = potential_stats(constant_potential(build_grid(2, 4.0, 3), 0.0));
  EXPECT_EQ(stats.min, 0.0);
  EXPECT_EQ(stats.max, 0.0);
  EXPECT_EQ(stats.mean, 0.0);
  EXPECT_FALSE(stats.single_site_integral.has_value());
}

TEST(PotentialStats, CosineBumpIntegralMatchesQuadrature) {
  const SingleSiteProfile p{ProfileShape::kCosineBump, 0.5, 1.5};
  using boost::math::quadrature::gauss_kronrod;
  const double one_d = gauss_kronrod<double, 61>::integrate(
      [&](double x) { return p.value({x, 0.0, 0.0}, 1); }, -0.5, 0.5, 15, 1e-14);
  EXPECT_NEAR(p.integral(1), one_d, 1e-8);
  const double two_d = gauss_kronrod<double, 61>::integrate(
      [&](double y) {
        return gauss_kronrod<double, 61>::integrate(
            [&](double x) { return p.value({x, y, 0.0}, 2); }, -0.5, 0.5, 15, 1e-14);
      },
      -0.5, 0.5, 15, 1e-14);
  EXPECT_NEAR(p.integral(2), two_d, 1e-8);
}

TEST(PotentialField, RestrictionAndCsv) {
  const Grid g = grid_with_resolution(1, 8.0, 2);
  const auto field = sample_random_potential(uniform_spec(8), g, 0);
  const Grid sub = sub_grid(g, {0.0, 0.0, 0.0}, 3.0);
  const auto r = restrict_potential(field, sub);
  EXPECT_EQ(r.values.size(), sub.size());
  std::ostringstream os;
  write_potential_csv(os, field);
  const std::string csv = os.str();
  EXPECT_EQ(csv.rfind("point,x,v\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), g.size() + 1);
}

}  // namespace
}  // namespace bosloc
