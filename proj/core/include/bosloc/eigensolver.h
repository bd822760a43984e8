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

#ifndef BOSLOC_EIGENSOLVER_H_
#define BOSLOC_EIGENSOLVER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bosloc/grid.h"
#include "bosloc/hamiltonian.h"

namespace bosloc {

enum class SolverMethod {
  kAuto,       // dense up to dense_cutoff points, iterative above
  kDense,      // LAPACK (tridiagonal MRRR in 1D, dsyevr otherwise)
  kIterative,  // shift-invert block Krylov with locking and thick restart
};

struct EigenOptions {
  SolverMethod method = SolverMethod::kAuto;
  std::size_t dense_cutoff = 2048;
  std::uint64_t seed = 0x5eed5eedULL;
  int block_size = 8;
  // Upper bound on the number of operator applications (block columns
  // expanded) before the iterative path gives up.
  int max_iterations = 2000;
};

// Lowest eigenpairs of a discrete Schrodinger operator. Eigenfunctions are
// stored column-wise and normalised in the weighted inner product
// h^d sum phi^2 = 1; the first component with |phi| > 1e-10 max|phi| is
// positive.
struct Spectrum {
  Grid grid;
  std::vector<double> energies;    // ascending
  Eigen::MatrixXd eigenfunctions;  // N_grid x m
  std::vector<double> residuals;   // ||H phi - E phi||_2 (weighted norm)

  std::size_t size() const { return energies.size(); }
  std::span<const double> eigenfunction(std::size_t i) const {
    return {eigenfunctions.col(static_cast<Eigen::Index>(i)).data(),
            static_cast<std::size_t>(eigenfunctions.rows())};
  }
};

// The m lowest eigenpairs of `op`, each with residual <= tol * max(1, E_m).
// Throws NumericalError carrying the achieved residuals on non-convergence.
Spectrum lowest_eigenpairs(const SymmetricOperator& op, std::size_t m, double tol,
                           const EigenOptions& options = {});

// Weighted residual ||H phi - E phi|| of one pair.
double eigen_residual(const SymmetricOperator& op, std::span<const double> phi,
                      double energy);

// Applies the sign convention (first significant component positive) in place.
void fix_signs(Eigen::Ref<Eigen::MatrixXd> vectors);

}  // namespace bosloc

#endif  // BOSLOC_EIGENSOLVER_H_
