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

#include <gtest/gtest.h>

#include "bosloc/error.h"
#include "bosloc/fock_oracle.h"

namespace bosloc {
namespace {

DiagonalModelSpec spec_of(std::vector<double> e, double beta, double mu, double lambda,
                          InteractionKind kind = InteractionKind::kMeanField, int n_max = 60) {
  DiagonalModelSpec s;
  s.energies = std::move(e);
  s.beta = beta;
  s.mu = mu;
  s.lambda = lambda;
  s.interaction = kind;
  s.n_max = n_max;
  return s;
}

TEST(FockOracle, FreeBoseOccupations) {
  const auto r = enumerate_gibbs(spec_of({0.5, 1.0}, 1.0, 0.0, 0.0));
  EXPECT_NEAR(r.mean_occupations[0], 1.0 / std::expm1(0.5), 1e-10);
  EXPECT_NEAR(r.mean_occupations[1], 1.0 / std::expm1(1.0), 1e-10);
  EXPECT_NEAR(r.mean_occupations[0], 1.5414940825367982, 1e-10);
  EXPECT_NEAR(r.mean_occupations[1], 0.5819767068693265, 1e-10);
  EXPECT_LT(r.tail_bound, kOracleTailTolerance);
}

TEST(FockOracle, FreePartitionFactorizes) {
  const std::vector<double> e = {0.3, 0.45, 0.9};
  const double beta = 2.0, mu = 0.1;
  const auto r = enumerate_gibbs(spec_of(e, beta, mu, 0.0, InteractionKind::kMeanField, 80));
  double log_z = 0.0;
  for (double x : e) log_z -= std::log1p(-std::exp(-beta * (x - mu)));
  // Truncation at n_max removes at most tail_bound of the weight.
  EXPECT_NEAR(r.log_partition, log_z, 1e-12 + r.tail_bound);
  EXPECT_NEAR(r.partition_value, std::exp(log_z), 1e-12 * std::exp(log_z));
}

TEST(FockOracle, SelfInteractionReference) {
  // Reference from an independent 30-digit brute-force sum (n_max = 80).
  const auto spec = spec_of({0.2, 0.4, 0.6}, 2.0, 0.5, 1.0, InteractionKind::kSelf, 80);
  const auto r = enumerate_gibbs(spec);
  EXPECT_NEAR(r.mean_occupations[0], 0.45856862999686779, 1e-12);
  EXPECT_NEAR(r.mean_occupations[1], 0.34170194140886557, 1e-12);
  EXPECT_NEAR(r.mean_occupations[2], 0.24814809308842204, 1e-12);
  EXPECT_NEAR(r.log_partition, 1.2118618727360412, 1e-12);
  EXPECT_GE(r.mean_occupations[0], r.mean_occupations[1]);
  EXPECT_GE(r.mean_occupations[1], r.mean_occupations[2]);
  auto wider = spec;
  wider.n_max = 120;
  const auto r2 = enumerate_gibbs(wider);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.mean_occupations[i], r2.mean_occupations[i], 1e-12);
}

TEST(FockOracle, DegenerateLevelsAreSymmetric) {
  for (auto kind : {InteractionKind::kMeanField, InteractionKind::kSelf}) {
    const auto r = enumerate_gibbs(spec_of({0.4, 0.4, 0.7}, 1.5, 0.2, 1.0, kind));
    EXPECT_EQ(r.mean_occupations[0], r.mean_occupations[1]);
  }
}

TEST(FockOracle, MeanSquareTotalConsistent) {
  const auto r = enumerate_gibbs(spec_of({0.5, 0.8}, 2.0, 0.0, 0.0));
  EXPECT_NEAR(r.mean_total, r.mean_occupations[0] + r.mean_occupations[1], 1e-12);
  EXPECT_GE(r.mean_square_total, r.mean_total * r.mean_total);
}

TEST(FockOracle, TailCertificateDemandsLargerCutoff) {
  // Weak confinement with a small cutoff leaves too much weight outside.
  EXPECT_THROW(enumerate_gibbs(spec_of({0.01, 0.02}, 1.0, 0.0, 0.0, InteractionKind::kMeanField, 5)),
               NumericalError);
}

TEST(FockOracle, ValidatesSpecs) {
  EXPECT_THROW(enumerate_gibbs(spec_of({}, 1.0, 0.0, 0.0)), InvalidArgument);
  EXPECT_THROW(enumerate_gibbs(spec_of({0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1}, 1.0, 0.0, 0.0)),
               InvalidArgument);
  EXPECT_THROW(enumerate_gibbs(spec_of({0.5}, 1.0, 0.0, 0.0, InteractionKind::kMeanField, 500)),
               InvalidArgument);
  // Free gas with mu above E_1 has no equilibrium, so no cutoff certifies.
  EXPECT_THROW(enumerate_gibbs(spec_of({0.5}, 1.0, 0.7, 0.0)), NumericalError);
  auto custom = spec_of({0.5, 0.6}, 1.0, 0.0, 1.0, InteractionKind::kCustom);
  custom.custom_matrix = {1.0, 0.5, 0.2, 1.0};  // not symmetric
  EXPECT_THROW(enumerate_gibbs(custom), InvalidArgument);
}

TEST(FockOracle, InteractionMatrices) {
  const auto mf = spec_of({0.1, 0.2}, 1.0, 0.0, 1.0, InteractionKind::kMeanField);
  const auto self = spec_of({0.1, 0.2}, 1.0, 0.0, 1.0, InteractionKind::kSelf);
  EXPECT_EQ(mf.a(0, 1), 1.0);
  EXPECT_EQ(self.a(0, 1), 0.0);
  EXPECT_EQ(self.a(1, 1), 1.0);
  EXPECT_EQ(parse_interaction_kind("mean-field"), InteractionKind::kMeanField);
  EXPECT_EQ(parse_interaction_kind("self"), InteractionKind::kSelf);
  EXPECT_THROW(parse_interaction_kind("other"), ConfigError);
  EXPECT_NE(mf.hash(), self.hash());
}

TEST(Monotonicity, FreeSortedSpecsAreMonotone) {
  std::vector<DiagonalModelSpec> specs = {
      spec_of({0.1, 0.2, 0.5}, 2.0, 0.0, 0.0, InteractionKind::kMeanField, 200),
      spec_of({0.3, 0.3, 0.4}, 1.0, -0.1, 0.0, InteractionKind::kMeanField, 120)};
  const auto report = monotonicity_certificate(specs);
  EXPECT_EQ(report.violations, 0);
  EXPECT_EQ(report.entries.size(), 2u);
  EXPECT_GE(report.min_margin, 0.0);
}

TEST(Monotonicity, RandomMeanFieldSweep) {
  const auto specs = random_diagonal_sweep(100, 4, 2024, InteractionKind::kMeanField);
  ASSERT_EQ(specs.size(), 100u);
  for (const auto& s : specs) {
    EXPECT_EQ(s.levels(), 4u);
    EXPECT_GE(s.beta, 0.5);
    EXPECT_LE(s.beta, 5.0);
    EXPECT_GE(s.lambda, 0.0);
    EXPECT_LE(s.lambda, 3.0);
  }
  const auto report = monotonicity_certificate(specs);
  EXPECT_EQ(report.violations, 0);
  for (const auto& e : report.entries) EXPECT_LT(e.tail_bound, kOracleTailTolerance);
}

TEST(Monotonicity, RejectsUnsortedSpecs) {
  std::vector<DiagonalModelSpec> specs = {spec_of({0.3, 0.1}, 1.0, 0.0, 0.0)};
  EXPECT_THROW(monotonicity_certificate(specs), InvalidArgument);
}

}  // namespace
}  // namespace bosloc
