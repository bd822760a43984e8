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

#include "bosloc/grid.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "bosloc/error.h"

namespace bosloc {

std::size_t Grid::size() const {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points_per_side);
  return total;
}

double Grid::volume() const { return std::pow(side, dim); }

double Grid::cell_measure() const { return std::pow(spacing, dim); }

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
  std::array<int, 3> m = {0, 0, 0};
  const auto n = static_cast<std::size_t>(points_per_side);
  for (int a = 0; a < dim; ++a) {
    m[a] = static_cast<int>(flat % n);
    flat /= n;
  }
  return m;
}

std::size_t Grid::flatten(const std::array<int, 3>& m) const {
  std::size_t flat = 0;
  const auto n = static_cast<std::size_t>(points_per_side);
  for (int a = dim - 1; a >= 0; --a) flat = flat * n + static_cast<std::size_t>(m[a]);
  return flat;
}

Grid build_grid(int dim, double side, int points_per_side,
                std::size_t max_points) {
  if (dim < 1 || dim > 3) {
    throw InvalidArgument(fmt::format("grid dimension must be 1, 2 or 3 (got {})", dim));
  }
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw InvalidArgument(fmt::format("grid side must be positive (got {})", side));
  }
  if (points_per_side < 2) {
    throw InvalidArgument(
        fmt::format("points_per_side must be >= 2 (got {})", points_per_side));
  }
  const double total = std::pow(static_cast<double>(points_per_side), dim);
  if (total > static_cast<double>(max_points)) {
    throw InvalidArgument(fmt::format(
        "grid with {}^{} points exceeds the memory cap of {} points",
        points_per_side, dim, max_points));
  }
  Grid g;
  g.dim = dim;
  g.side = side;
  g.points_per_side = points_per_side;
  g.spacing = side / (points_per_side + 1);
  return g;
}

Grid grid_with_resolution(int dim, double side, int points_per_unit,
                          std::size_t max_points) {
  if (points_per_unit < 1) {
    throw InvalidArgument("points per unit length must be positive");
  }
  const double cells = side * points_per_unit;
  const long rounded = std::lround(cells);
  if (std::abs(cells - static_cast<double>(rounded)) > 1e-9 * cells) {
    throw InvalidArgument(fmt::format(
        "side {} times resolution {} is not an integer cell count", side,
        points_per_unit));
  }
  return build_grid(dim, side, static_cast<int>(rounded) - 1, max_points);
}

Grid sub_grid(const Grid& parent, const std::array<double, 3>& center,
              double side) {
  const double cells = side / parent.spacing;
  const long rounded = std::lround(cells);
  if (std::abs(cells - static_cast<double>(rounded)) > 1e-9 * cells || rounded < 3) {
    throw InvalidArgument(fmt::format(
        "sub-box side {} is not a multiple of the grid spacing {}", side,
        parent.spacing));
  }
  Grid g = build_grid(parent.dim, side, static_cast<int>(rounded) - 1);
  g.spacing = parent.spacing;
  for (int a = 0; a < parent.dim; ++a) {
    g.center[a] = center[a];
    const double lo = center[a] - 0.5 * side;
    const double hi = center[a] + 0.5 * side;
    const double plo = parent.center[a] - 0.5 * parent.side;
    const double phi = parent.center[a] + 0.5 * parent.side;
    const double eps = 1e-9 * parent.spacing;
    if (lo < plo - eps || hi > phi + eps) {
      throw InvalidArgument(fmt::format(
          "sub-box [{}, {}] leaves the parent box [{}, {}] on axis {}", lo, hi,
          plo, phi, a));
    }
    const double offset = (lo - plo) / parent.spacing;
    if (std::abs(offset - std::round(offset)) > 1e-9) {
      throw InvalidArgument("sub-box does not align with the parent grid");
    }
  }
  return g;
}

std::vector<std::size_t> embed_indices(const Grid& parent, const Grid& sub) {
  std::array<int, 3> shift = {0, 0, 0};
  for (int a = 0; a < parent.dim; ++a) {
    const double offset = (sub.center[a] - 0.5 * sub.side -
                           (parent.center[a] - 0.5 * parent.side)) /
                          parent.spacing;
    shift[a] = static_cast<int>(std::lround(offset));
  }
  std::vector<std::size_t> out(sub.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto m = sub.unflatten(i);
    for (int a = 0; a < parent.dim; ++a) m[a] += shift[a];
    out[i] = parent.flatten(m);
  }
  return out;
}

double inner(const Grid& grid, std::span<const double> u,
             std::span<const double> v) {
  if (u.size() != v.size()) throw InvalidArgument("inner: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return grid.cell_measure() * s;
}

double norm_l2(const Grid& grid, std::span<const double> u) {
  return std::sqrt(inner(grid, u, u));
}

double norm_l1(const Grid& grid, std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += std::abs(x);
  return grid.cell_measure() * s;
}

double norm_sup(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s = std::max(s, std::abs(x));
  return s;
}

double kinetic_energy_1d(const Grid& grid, int j) {
  const double h = grid.spacing;
  const double s = std::sin(j * std::numbers::pi / (2.0 * (grid.points_per_side + 1)));
  return 2.0 / (h * h) * s * s;
}

namespace {

// Sum of per-axis energies in a canonical order so that permuted
// multi-indices give bit-identical totals.
double mode_energy(const std::vector<double>& e1d, const std::array<int, 3>& k,
                   int dim) {
  std::array<double, 3> parts = {0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) parts[a] = e1d[k[a] - 1];
  std::sort(parts.begin(), parts.begin() + dim);
  double e = 0.0;
  for (int a = 0; a < dim; ++a) e += parts[a];
  return e;
}

}  // namespace

std::vector<KineticMode> kinetic_modes(const Grid& grid, std::size_t count) {
  const std::size_t total = grid.size();
  if (count < 1 || count > total) {
    throw InvalidArgument(
        fmt::format("mode count {} outside [1, {}]", count, total));
  }
  const int n = grid.points_per_side;
  std::vector<double> e1d(n);
  for (int j = 1; j <= n; ++j) e1d[j - 1] = kinetic_energy_1d(grid, j);

  std::vector<KineticMode> all(total);
  for (std::size_t f = 0; f < total; ++f) {
    auto m = grid.unflatten(f);
    KineticMode mode;
    for (int a = 0; a < grid.dim; ++a) mode.index[a] = m[a] + 1;
    mode.energy = mode_energy(e1d, mode.index, grid.dim);
    all[f] = mode;
  }
  auto less = [](const KineticMode& x, const KineticMode& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return x.index < y.index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count),
                    all.end(), less);
  all.resize(count);
  return all;
}

std::vector<double> kinetic_mode_values(const Grid& grid,
                                        const KineticMode& mode) {
  const int n = grid.points_per_side;
  const double amp = std::sqrt(2.0 / (grid.spacing * (n + 1)));
  std::array<std::vector<double>, 3> factor;
  for (int a = 0; a < grid.dim; ++a) {
    if (mode.index[a] < 1 || mode.index[a] > n) {
      throw InvalidArgument("kinetic mode index out of range");
    }
    factor[a].resize(n);
    for (int m = 1; m <= n; ++m) {
      // Reduce the phase modulo 2(n+1) first so large j*m keep full accuracy.
      const long phase = (static_cast<long>(mode.index[a]) * m) % (2L * (n + 1));
      factor[a][m - 1] =
          amp * std::sin(static_cast<double>(phase) * std::numbers::pi / (n + 1));
    }
  }
  std::vector<double> out(grid.size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto m = grid.unflatten(f);
    double v = 1.0;
    for (int a = 0; a < grid.dim; ++a) v *= factor[a][m[a]];
    out[f] = v;
  }
  return out;
}

double kinetic_sup_bound(const Grid& grid) {
  return std::pow(2.0 / grid.side, 0.5 * grid.dim);
}

}  // namespace bosloc
