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

#ifndef BOSLOC_POTENTIAL_H_
#define BOSLOC_POTENTIAL_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bosloc/grid.h"

namespace bosloc {

enum class ProfileShape { kIndicator, kCosineBump };

// Single-impurity profile f on the unit cell [-1/2, 1/2)^d. Both shapes are
// bounded and satisfy f >= floor > 0 on the whole cell.
//   indicator:   f = floor
//   cosine-bump: f = floor + (peak - floor) prod_j cos^2(pi x_j)
struct SingleSiteProfile {
  ProfileShape shape = ProfileShape::kIndicator;
  double floor = 1.0;  // sigma
  double peak = 1.0;   // max f; equals floor for the indicator

  double value(const std::array<double, 3>& x, int dim) const;
  double maximum() const;
  // A = int over the unit cell of f, in closed form.
  double integral(int dim) const;
  void validate() const;
};

// Uniform strength distribution on [0, a]; a = 0 is the point mass at 0.
struct StrengthDistribution {
  double a = 1.0;

  double sample(double u01) const { return a * u01; }
  // Exponent alpha with mu([s,t]) <= eta^alpha for all 0 <= eta <= 1, when
  // one exists. Uniform on [0,a]: 1 for a >= 1, none for 0 < a < 1 (the
  // normalisation fails at eta = 1), and none for the point mass.
  std::optional<double> holder_exponent() const;
  void validate() const;
};

struct RandomPotentialSpec {
  SingleSiteProfile profile;
  StrengthDistribution strengths;
  std::uint64_t seed = 0;

  // Non-random bound M with 0 <= v(x) < M (cells tile the box, so the
  // covering multiplicity is 1). Equals 0 for a = 0.
  double bound() const;
  std::string describe() const;
};

struct WeakZero {
  std::array<double, 3> y = {0.5, 0.5, 0.5};  // in the open unit cube
  double alpha = 2.0;
  double c = 1.0;
};

// Weak potential on the closed unit cube built as
//   v(z) = min_j c_j |z - y_j|^{alpha_j},
// which is continuous, vanishes exactly at the y_j and behaves like
// c_j |z - y_j|^{alpha_j} near each zero.
struct WeakPotentialSpec {
  int dim = 1;
  std::vector<WeakZero> zeros;

  // Sorts zeros by ascending alpha and rejects zeros outside the open cube.
  void normalize();
  double unit_value(const std::array<double, 3>& z) const;
  const WeakZero& dominant_zero() const { return zeros.back(); }
  std::string describe() const;
};

struct RandomProvenance {
  RandomPotentialSpec spec;
  std::uint64_t realization = 0;
};
struct WeakProvenance {
  WeakPotentialSpec spec;
};
struct ExplicitProvenance {
  std::string label;
};
using Provenance = std::variant<RandomProvenance, WeakProvenance, ExplicitProvenance>;

struct PotentialField {
  Grid grid;
  std::vector<double> values;
  Provenance provenance;

  std::string describe() const;
  // FNV-1a hash of describe() plus the grid, used as a cache key.
  std::uint64_t provenance_hash() const;
};

// Strength q(k) of the impurity at lattice cell k for a given realization.
// A pure function of (seed, realization, k).
double impurity_strength(const RandomPotentialSpec& spec,
                         std::uint64_t realization,
                         const std::array<int, 3>& cell);

// v(x) = sum_k q(k) f(x - k) on the grid points; cells are the half-open
// unit cubes [k - 1/2, k + 1/2)^d, k in Z^d.
PotentialField sample_random_potential(const RandomPotentialSpec& spec,
                                       const Grid& grid,
                                       std::uint64_t realization);

// v_l(x) = v_unit((x + l/2) / l) for the box of side l centred at 0.
PotentialField evaluate_weak_potential(const WeakPotentialSpec& spec,
                                       const Grid& grid);

PotentialField constant_potential(const Grid& grid, double value);
PotentialField explicit_potential(const Grid& grid, std::vector<double> values,
                                  std::string label = "explicit");

// Values of `field` on the points of a sub-grid produced by sub_grid().
PotentialField restrict_potential(const PotentialField& field, const Grid& sub);

struct PotentialStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::optional<double> single_site_integral;
};

PotentialStats potential_stats(const PotentialField& field);

// Columns: point, x[, y[, z]], v.
void write_potential_csv(std::ostream& out, const PotentialField& field);

}  // namespace bosloc

#endif  // BOSLOC_POTENTIAL_H_
