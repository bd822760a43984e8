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

#include "bosloc/hamiltonian.h"

#include <cmath>

#include <fmt/format.h>

#include "bosloc/error.h"

namespace bosloc {

SymmetricOperator::SymmetricOperator(Grid grid, std::vector<double> potential)
    : grid_(grid), potential_(std::move(potential)) {
  if (potential_.size() != grid_.size()) {
    throw InvalidArgument(fmt::format("potential has {} values for a grid of {} points",
                                      potential_.size(), grid_.size()));
  }
  for (double v : potential_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(fmt::format("potential must be finite and >= 0 (got {})", v));
    }
  }
  const double h2 = grid_.spacing * grid_.spacing;
  kinetic_diagonal_ = grid_.dim / h2;
  coupling_ = -0.5 / h2;
}

std::size_t SymmetricOperator::bandwidth() const {
  std::size_t b = 1;
  for (int a = 1; a < grid_.dim; ++a) b *= static_cast<std::size_t>(grid_.points_per_side);
  return b;
}

void SymmetricOperator::apply(std::span<const double> x, std::span<double> y,
                              double shift) const {
  Eigen::Map<const Eigen::MatrixXd> xm(x.data(), static_cast<Eigen::Index>(x.size()), 1);
  Eigen::Map<Eigen::MatrixXd> ym(y.data(), static_cast<Eigen::Index>(y.size()), 1);
  apply(xm, ym, shift);
}

void SymmetricOperator::apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
                              Eigen::Ref<Eigen::MatrixXd> y, double shift) const {
  const auto n = static_cast<std::size_t>(grid_.points_per_side);
  const std::size_t total = size();
  if (static_cast<std::size_t>(x.rows()) != total || y.rows() != x.rows() ||
      y.cols() != x.cols()) {
    throw InvalidArgument("operator apply: shape mismatch");
  }
  std::size_t stride[3] = {1, n, n * n};
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double* in = x.col(c).data();
    double* out = y.col(c).data();
    for (std::size_t i = 0; i < total; ++i) {
      out[i] = (kinetic_diagonal_ + potential_[i] - shift) * in[i];
    }
    for (int a = 0; a < grid_.dim; ++a) {
      const std::size_t s = stride[a];
      // i and i+s are neighbours unless i sits on the upper face of axis a.
      for (std::size_t i = 0; i + s < total; ++i) {
        if ((i / s) % n == n - 1) continue;
        out[i] += coupling_ * in[i + s];
        out[i + s] += coupling_ * in[i];
      }
    }
  }
}

Eigen::MatrixXd SymmetricOperator::to_dense() const {
  const auto total = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(total, total);
  Eigen::MatrixXd out(total, total);
  apply(a, out);
  return out;
}

SymmetricOperator assemble_hamiltonian(const Grid& grid, const PotentialField& v) {
  if (!(v.grid == grid)) throw InvalidArgument("potential field lives on a different grid");
  return SymmetricOperator(grid, v.values);
}

}  // namespace bosloc
