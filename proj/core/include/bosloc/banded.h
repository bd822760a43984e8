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

#ifndef BOSLOC_BANDED_H_
#define BOSLOC_BANDED_H_

#include <vector>

#include <Eigen/Core>

#include "bosloc/hamiltonian.h"

namespace bosloc {

// Banded Cholesky factorisation of H - shift (must be positive definite).
class BandedCholesky {
 public:
  BandedCholesky(const SymmetricOperator& op, double shift);

  // Overwrites `rhs` (n x k) with (H - shift)^{-1} rhs.
  void solve(Eigen::Ref<Eigen::MatrixXd> rhs) const;

 private:
  int n_;
  int kd_;
  std::vector<double> band_;
};

// Banded LU factorisation with partial pivoting of H - shift; handles
// indefinite shifts inside the spectrum.
class BandedLU {
 public:
  BandedLU(const SymmetricOperator& op, double shift);

  void solve(Eigen::Ref<Eigen::MatrixXd> rhs) const;

 private:
  int n_;
  int kd_;
  std::vector<double> band_;
  std::vector<int> pivots_;
};

}  // namespace bosloc

#endif  // BOSLOC_BANDED_H_
