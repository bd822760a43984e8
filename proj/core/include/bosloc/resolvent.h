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

#ifndef BOSLOC_RESOLVENT_H_
#define BOSLOC_RESOLVENT_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bosloc/hamiltonian.h"

namespace bosloc {

inline constexpr double kCollisionTolerance = 1e-12;
inline constexpr double kDefaultEpsShift = 1e-9;

// Masks are lists of flat grid indices of `op`. They need not be disjoint.
struct ResolventBlockQuery {
  const SymmetricOperator* op = nullptr;
  double energy = 0.0;
  std::vector<std::size_t> mask_in;
  std::vector<std::size_t> mask_out;
};

struct ResolventOptions {
  // Relative accuracy of the returned norm.
  double rel_tol = 1e-6;
  int max_iterations = 400;
  std::uint64_t seed = 0x7265736fULL;
};

// dist(E, spec(H)) = 1 / ||(H - E)^{-1}||. Throws SpectralCollision when the
// distance is below kCollisionTolerance * max(1, |E|).
double distance_to_spectrum(const SymmetricOperator& op, double energy,
                            const ResolventOptions& options = {});

// ||chi_out (H - E)^{-1} chi_in||, the largest singular value of the block.
double resolvent_block_norm(const ResolventBlockQuery& query,
                            const ResolventOptions& options = {});

struct ShiftedNorm {
  double norm = 0.0;
  double energy = 0.0;     // probe energy actually used
  double eps_shift = 0.0;  // energy - requested energy
};

// As resolvent_block_norm, but on a spectral collision retries once at
// E + eps_shift and records the shift.
ShiftedNorm resolvent_block_norm_shifted(ResolventBlockQuery query,
                                         double eps_shift = kDefaultEpsShift,
                                         const ResolventOptions& options = {});

}  // namespace bosloc

#endif  // BOSLOC_RESOLVENT_H_
