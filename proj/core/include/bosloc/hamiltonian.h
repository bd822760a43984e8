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

#ifndef BOSLOC_HAMILTONIAN_H_
#define BOSLOC_HAMILTONIAN_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bosloc/grid.h"
#include "bosloc/potential.h"

namespace bosloc {

// h = -Delta/2 + v on a Grid: the (2d+1)-point Dirichlet finite-difference
// Laplacian scaled by 1/2 plus the diagonal potential. The matrix is
// symmetric in the Euclidean sense, hence self-adjoint for the weighted
// inner product as well. Immutable once built.
class SymmetricOperator {
 public:
  SymmetricOperator(Grid grid, std::vector<double> potential);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return potential_.size(); }
  std::span<const double> potential() const { return potential_; }

  double diagonal(std::size_t i) const { return kinetic_diagonal_ + potential_[i]; }
  // Nearest-neighbour coupling -1/(2h^2).
  double coupling() const { return coupling_; }
  // Half-bandwidth in the flattened ordering, n^{d-1}.
  std::size_t bandwidth() const;

  // y = (H - shift) x.
  void apply(std::span<const double> x, std::span<double> y, double shift = 0.0) const;
  void apply(const Eigen::Ref<const Eigen::MatrixXd>& x, Eigen::Ref<Eigen::MatrixXd> y,
             double shift = 0.0) const;

  Eigen::MatrixXd to_dense() const;

 private:
  Grid grid_;
  std::vector<double> potential_;
  double kinetic_diagonal_;
  double coupling_;
};

SymmetricOperator assemble_hamiltonian(const Grid& grid, const PotentialField& v);

}  // namespace bosloc

#endif  // BOSLOC_HAMILTONIAN_H_
