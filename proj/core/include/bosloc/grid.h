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

#ifndef BOSLOC_GRID_H_
#define BOSLOC_GRID_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace bosloc {

// Default cap on the number of interior grid points a Grid may hold.
inline constexpr std::size_t kDefaultMaxGridPoints = std::size_t{1} << 22;

// Uniform interior grid of the open box of side `side` centred at `center`
// with Dirichlet boundary. Points sit at center - side/2 + spacing*(m+1),
// m = 0..points_per_side-1, along each axis; axis 0 varies fastest in the
// flattened index.
struct Grid {
  int dim = 1;
  double side = 1.0;
  int points_per_side = 2;
  double spacing = 0.5;
  std::array<double, 3> center = {0.0, 0.0, 0.0};

  std::size_t size() const;
  double volume() const;
  // h^d, the weight of one grid point in every integral.
  double cell_measure() const;
  double coordinate(int m, int axis) const {
    return center[axis] - 0.5 * side + spacing * (m + 1);
  }
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& m) const;
  // Grid points per unit length, (n+1)/l.
  double resolution() const { return (points_per_side + 1) / side; }

  bool operator==(const Grid&) const = default;
};

Grid build_grid(int dim, double side, int points_per_side,
                std::size_t max_points = kDefaultMaxGridPoints);

// Grid of side `side` with (points_per_unit * side) cells per axis.
Grid grid_with_resolution(int dim, double side, int points_per_unit,
                          std::size_t max_points = kDefaultMaxGridPoints);

// Sub-box of `parent` of the given side centred at `center`, sharing the
// parent's spacing and point lattice. Throws if it does not fit or does not
// align with the parent points.
Grid sub_grid(const Grid& parent, const std::array<double, 3>& center,
              double side);

// Parent flat index of every point of `sub` (which must come from sub_grid).
std::vector<std::size_t> embed_indices(const Grid& parent, const Grid& sub);

// Discrete inner product (u, v) = h^d sum_x u(x) v(x).
double inner(const Grid& grid, std::span<const double> u,
             std::span<const double> v);
double norm_l2(const Grid& grid, std::span<const double> u);
double norm_l1(const Grid& grid, std::span<const double> u);
double norm_sup(std::span<const double> u);

struct KineticMode {
  std::array<int, 3> index = {0, 0, 0};  // 1-based per used axis, 0 otherwise
  double energy = 0.0;
};

// 1D Dirichlet eigenvalue (2/h^2) sin^2(j pi / (2(n+1))), j = 1..n.
double kinetic_energy_1d(const Grid& grid, int j);

// The `count` lowest modes of the discrete -Delta/2 on `grid`, ascending in
// energy with ties broken by lexicographic multi-index.
std::vector<KineticMode> kinetic_modes(const Grid& grid, std::size_t count);

// Values of a mode at every grid point; discretely L2-normalised.
std::vector<double> kinetic_mode_values(const Grid& grid,
                                        const KineticMode& mode);

// Sup-norm bound of every Dirichlet sine mode, (2/l)^{d/2}. Note that the
// continuum bound l^{-d/2} quoted in the literature misses the factor
// 2^{d/2}; every inequality in this library uses this value instead.
double kinetic_sup_bound(const Grid& grid);

}  // namespace bosloc

#endif  // BOSLOC_GRID_H_
