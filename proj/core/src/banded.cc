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

#include "bosloc/banded.h"

#include <fmt/format.h>

#include "bosloc/error.h"
#include "lapack.h"

namespace bosloc {
namespace {

// Calls f(i, j, value) for every nonzero entry A(i, j) with i >= j of
// H - shift, using the stencil structure directly.
template <typename F>
void for_each_lower_entry(const SymmetricOperator& op, double shift, F&& f) {
  const Grid& g = op.grid();
  const auto n = static_cast<std::size_t>(g.points_per_side);
  const std::size_t total = op.size();
  const std::size_t stride[3] = {1, n, n * n};
  for (std::size_t j = 0; j < total; ++j) {
    f(j, j, op.diagonal(j) - shift);
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t s = stride[a];
      if (j + s < total && (j / s) % n != n - 1) f(j + s, j, op.coupling());
    }
  }
}

}  // namespace

BandedCholesky::BandedCholesky(const SymmetricOperator& op, double shift)
    : n_(static_cast<int>(op.size())), kd_(static_cast<int>(op.bandwidth())) {
  const int ldab = kd_ + 1;
  band_.assign(static_cast<std::size_t>(ldab) * n_, 0.0);
  for_each_lower_entry(op, shift, [&](std::size_t i, std::size_t j, double v) {
    band_[(i - j) + j * ldab] = v;
  });
  int info = 0;
  dpbtrf_("L", &n_, &kd_, band_.data(), &ldab, &info, 1);
  if (info != 0) {
    throw NumericalError(fmt::format(
        "banded Cholesky failed (info = {}): H - {} is not positive definite", info,
        shift));
  }
}

void BandedCholesky::solve(Eigen::Ref<Eigen::MatrixXd> rhs) const {
  if (rhs.rows() != n_) throw InvalidArgument("banded solve: shape mismatch");
  const int ldab = kd_ + 1;
  const int nrhs = static_cast<int>(rhs.cols());
  const int ldb = static_cast<int>(rhs.outerStride());
  int info = 0;
  dpbtrs_("L", &n_, &kd_, &nrhs, band_.data(), &ldab, rhs.data(), &ldb, &info, 1);
  if (info != 0) throw NumericalError(fmt::format("dpbtrs failed (info = {})", info));
}

BandedLU::BandedLU(const SymmetricOperator& op, double shift)
    : n_(static_cast<int>(op.size())), kd_(static_cast<int>(op.bandwidth())) {
  const int ldab = 3 * kd_ + 1;
  band_.assign(static_cast<std::size_t>(ldab) * n_, 0.0);
  pivots_.assign(static_cast<std::size_t>(n_), 0);
  // A(i, j) lives at AB(2kd + i - j, j), zero-based.
  auto put = [&](std::size_t i, std::size_t j, double v) {
    band_[(2 * kd_ + i - j) + j * ldab] = v;
  };
  for_each_lower_entry(op, shift, [&](std::size_t i, std::size_t j, double v) {
    put(i, j, v);
    if (i != j) put(j, i, v);
  });
  int info = 0;
  dgbtrf_(&n_, &n_, &kd_, &kd_, band_.data(), &ldab, pivots_.data(), &info);
  if (info > 0) {
    throw SpectralCollision(
        fmt::format("banded LU: exactly singular pivot {} for shift {}", info, shift), 0.0);
  }
  if (info < 0) throw NumericalError(fmt::format("dgbtrf failed (info = {})", info));
}

void BandedLU::solve(Eigen::Ref<Eigen::MatrixXd> rhs) const {
  if (rhs.rows() != n_) throw InvalidArgument("banded solve: shape mismatch");
  const int ldab = 3 * kd_ + 1;
  const int nrhs = static_cast<int>(rhs.cols());
  const int ldb = static_cast<int>(rhs.outerStride());
  int info = 0;
  dgbtrs_("N", &n_, &kd_, &kd_, &nrhs, band_.data(), &ldab, pivots_.data(), rhs.data(),
          &ldb, &info, 1);
  if (info != 0) throw NumericalError(fmt::format("dgbtrs failed (info = {})", info));
}

}  // namespace bosloc
