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

#include "bosloc/potential.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "bosloc/error.h"
#include "bosloc/philox.h"

namespace bosloc {

double SingleSiteProfile::value(const std::array<double, 3>& x, int dim) const {
  if (shape == ProfileShape::kIndicator) return floor;
  double bump = 1.0;
  for (int a = 0; a < dim; ++a) {
    const double c = std::cos(std::numbers::pi * x[a]);
    bump *= c * c;
  }
  return floor + (peak - floor) * bump;
}

double SingleSiteProfile::maximum() const {
  return shape == ProfileShape::kIndicator ? floor : std::max(floor, peak);
}

double SingleSiteProfile::integral(int dim) const {
  if (shape == ProfileShape::kIndicator) return floor;
  // int_{-1/2}^{1/2} cos^2(pi x) dx = 1/2 per axis.
  return floor + (peak - floor) * std::pow(0.5, dim);
}

void SingleSiteProfile::validate() const {
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw InvalidArgument("single-site profile floor sigma must be positive");
  }
  if (shape == ProfileShape::kCosineBump && !(peak >= floor && std::isfinite(peak))) {
    throw InvalidArgument("cosine-bump peak must be finite and >= floor");
  }
}

std::optional<double> StrengthDistribution::holder_exponent() const {
  if (a >= 1.0) return 1.0;
  return std::nullopt;
}

void StrengthDistribution::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw InvalidArgument("strength support endpoint a must be finite and >= 0");
  }
}

double RandomPotentialSpec::bound() const {
  return strengths.a * profile.maximum();
}

std::string RandomPotentialSpec::describe() const {
  return fmt::format("random profile={} floor={:.17g} peak={:.17g} a={:.17g} seed={}",
                     profile.shape == ProfileShape::kIndicator ? "indicator"
                                                               : "cosine-bump",
                     profile.floor, profile.peak, strengths.a, seed);
}

void WeakPotentialSpec::normalize() {
  if (dim < 1 || dim > 3) throw InvalidArgument("weak potential dim must be 1..3");
  if (zeros.empty()) throw InvalidArgument("weak potential needs at least one zero");
  for (const auto& z : zeros) {
    for (int a = 0; a < dim; ++a) {
      if (!(z.y[a] > 0.0 && z.y[a] < 1.0)) {
        throw InvalidArgument(fmt::format(
            "weak-potential zero coordinate {} is not inside the open unit cube",
            z.y[a]));
      }
    }
    if (!(z.alpha > 0.0) || !(z.c > 0.0)) {
      throw InvalidArgument("weak-potential alpha and c must be positive");
    }
  }
  std::stable_sort(zeros.begin(), zeros.end(),
                   [](const WeakZero& p, const WeakZero& q) { return p.alpha < q.alpha; });
}

double WeakPotentialSpec::unit_value(const std::array<double, 3>& z) const {
  double v = INFINITY;
  for (const auto& zero : zeros) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double d = z[a] - zero.y[a];
      r2 += d * d;
    }
    v = std::min(v, zero.c * std::pow(std::sqrt(r2), zero.alpha));
  }
  return v;
}

std::string WeakPotentialSpec::describe() const {
  std::string s = fmt::format("weak dim={}", dim);
  for (const auto& z : zeros) {
    s += fmt::format(" zero=({:.17g},{:.17g},{:.17g}):{:.17g}:{:.17g}", z.y[0], z.y[1],
                     z.y[2], z.alpha, z.c);
  }
  return s;
}

std::string PotentialField::describe() const {
  struct Visitor {
    std::string operator()(const RandomProvenance& p) const {
      return fmt::format("{} realization={}", p.spec.describe(), p.realization);
    }
    std::string operator()(const WeakProvenance& p) const { return p.spec.describe(); }
    std::string operator()(const ExplicitProvenance& p) const {
      return "explicit " + p.label;
    }
  };
  return std::visit(Visitor{}, provenance);
}

std::uint64_t PotentialField::provenance_hash() const {
  const std::string key =
      fmt::format("{} | grid dim={} side={:.17g} n={} center=({:.17g},{:.17g},{:.17g})",
                  describe(), grid.dim, grid.side, grid.points_per_side,
                  grid.center[0], grid.center[1], grid.center[2]);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  // Explicit fields are identified by their values as well.
  if (std::holds_alternative<ExplicitProvenance>(provenance)) {
    for (double v : values) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(v));
      h ^= bits;
      h *= 1099511628211ull;
    }
  }
  return h;
}

double impurity_strength(const RandomPotentialSpec& spec, std::uint64_t realization,
                         const std::array<int, 3>& cell) {
  if (realization > 0xFFFFFFFFull) {
    throw InvalidArgument("realization index must fit in 32 bits");
  }
  const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(realization),
                                   static_cast<std::uint32_t>(cell[0]),
                                   static_cast<std::uint32_t>(cell[1]),
                                   static_cast<std::uint32_t>(cell[2])};
  const auto block = Philox4x32::generate(ctr, Philox4x32::key_from_seed(spec.seed));
  return spec.strengths.sample(uniform_from_block(block));
}

PotentialField sample_random_potential(const RandomPotentialSpec& spec,
                                       const Grid& grid, std::uint64_t realization) {
  spec.profile.validate();
  spec.strengths.validate();
  if (grid.side < 1.0) {
    throw InvalidArgument("random potential needs a box of side >= 1");
  }
  PotentialField field{grid, std::vector<double>(grid.size(), 0.0),
                       RandomProvenance{spec, realization}};
  if (spec.strengths.a == 0.0) return field;
  for (std::size_t f = 0; f < field.values.size(); ++f) {
    const auto m = grid.unflatten(f);
    std::array<int, 3> cell = {0, 0, 0};
    std::array<double, 3> rel = {0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim; ++a) {
      const double x = grid.coordinate(m[a], a);
      cell[a] = static_cast<int>(std::floor(x + 0.5));
      rel[a] = x - cell[a];
    }
    field.values[f] =
        impurity_strength(spec, realization, cell) * spec.profile.value(rel, grid.dim);
  }
  return field;
}

PotentialField evaluate_weak_potential(const WeakPotentialSpec& spec_in,
                                       const Grid& grid) {
  WeakPotentialSpec spec = spec_in;
  spec.normalize();
  if (spec.dim != grid.dim) throw InvalidArgument("weak potential / grid dimension mismatch");
  PotentialField field{grid, std::vector<double>(grid.size()), WeakProvenance{spec}};
  for (std::size_t f = 0; f < field.values.size(); ++f) {
    const auto m = grid.unflatten(f);
    std::array<double, 3> z = {0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim; ++a) {
      z[a] = (grid.coordinate(m[a], a) + 0.5 * grid.side) / grid.side;
    }
    field.values[f] = spec.unit_value(z);
  }
  return field;
}

PotentialField constant_potential(const Grid& grid, double value) {
  if (!(value >= 0.0)) throw InvalidArgument("potential must be non-negative");
  return PotentialField{grid, std::vector<double>(grid.size(), value),
                        ExplicitProvenance{fmt::format("constant {:.17g}", value)}};
}

PotentialField explicit_potential(const Grid& grid, std::vector<double> values,
                                  std::string label) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("potential values do not match the grid size");
  }
  return PotentialField{grid, std::move(values), ExplicitProvenance{std::move(label)}};
}

PotentialField restrict_potential(const PotentialField& field, const Grid& sub) {
  const auto idx = embed_indices(field.grid, sub);
  std::vector<double> values(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) values[i] = field.values[idx[i]];
  return PotentialField{sub, std::move(values),
                        ExplicitProvenance{"restriction of " + field.describe()}};
}

PotentialStats potential_stats(const PotentialField& field) {
  PotentialStats s;
  if (field.values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0.0;
  for (double v : field.values) sum += v;
  // Mean under the grid measure h^d normalised over the N_grid points.
  s.mean = sum / static_cast<double>(field.values.size());
  if (const auto* r = std::get_if<RandomProvenance>(&field.provenance)) {
    s.single_site_integral = r->spec.profile.integral(field.grid.dim);
  }
  return s;
}

void write_potential_csv(std::ostream& out, const PotentialField& field) {
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  out << "point";
  for (int a = 0; a < field.grid.dim; ++a) out << ',' << kAxis[a];
  out << ",v\n";
  for (std::size_t f = 0; f < field.values.size(); ++f) {
    const auto m = field.grid.unflatten(f);
    out << f;
    for (int a = 0; a < field.grid.dim; ++a) {
      out << fmt::format(",{:.17g}", field.grid.coordinate(m[a], a));
    }
    out << fmt::format(",{:.17g}\n", field.values[f]);
  }
  if (!out) throw IoError("failed writing potential CSV");
}

}  // namespace bosloc
