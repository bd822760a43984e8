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

#include "bosloc/resolvent.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "bosloc/banded.h"
#include "bosloc/error.h"
#include "bosloc/philox.h"

namespace bosloc {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

using LinearMap = std::function<void(const VectorXd&, VectorXd&)>;

// Largest |eigenvalue| of a symmetric map on R^dim by Lanczos with full
// reorthogonalisation. Converges on the Ritz residual of the extreme pair.
double lanczos_extreme(const LinearMap& apply, Index dim, const ResolventOptions& opts) {
  if (dim == 0) return 0.0;
  const Index kmax = std::min<Index>(dim, opts.max_iterations);
  MatrixXd v(dim, kmax);
  std::vector<double> alpha, beta;
  PhiloxStream stream(opts.seed, static_cast<std::uint64_t>(dim));
  VectorXd q(dim);
  for (Index i = 0; i < dim; ++i) q(i) = stream.normal();
  q.normalize();
  VectorXd w(dim);
  double estimate = 0.0;
  for (Index k = 0; k < kmax; ++k) {
    v.col(k) = q;
    apply(q, w);
    const double a = q.dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      w -= v.leftCols(k + 1) * (v.leftCols(k + 1).transpose() * w);
    }
    const double b = w.norm();
    // Ritz values of the tridiagonal projection.
    const Index m = k + 1;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    MatrixXd t = MatrixXd::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    es.compute(t);
    const Index top = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(m - 1))
                          ? 0
                          : m - 1;
    estimate = std::abs(es.eigenvalues()(top));
    const double ritz_residual = b * std::abs(es.eigenvectors()(m - 1, top));
    // Eigenvalue error is at most the residual; keep a safety factor.
    if (ritz_residual <= 0.1 * opts.rel_tol * estimate || m == dim ||
        b <= 1e-14 * std::max(estimate, 1e-300)) {
      return estimate;
    }
    beta.push_back(b);
    q = w / b;
  }
  throw NumericalError(fmt::format("Lanczos did not converge in {} steps (estimate {:.6e})",
                                   kmax, estimate));
}

void check_mask(const std::vector<std::size_t>& mask, std::size_t n, const char* name) {
  std::vector<std::size_t> sorted = mask;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument(fmt::format("{} contains duplicate indices", name));
  }
  if (!sorted.empty() && sorted.back() >= n) {
    throw InvalidArgument(fmt::format("{} index out of range", name));
  }
}

double collision_scale(double energy) { return kCollisionTolerance * std::max(1.0, std::abs(energy)); }

double distance_with(const BandedLU& lu, Index n, double energy, const ResolventOptions& opts) {
  const LinearMap apply = [&](const VectorXd& x, VectorXd& y) {
    y = x;
    lu.solve(y);
  };
  const double inv_norm = lanczos_extreme(apply, n, opts);
  const double dist = inv_norm > 0.0 ? 1.0 / inv_norm : 0.0;
  if (!(dist > collision_scale(energy))) {
    throw SpectralCollision(
        fmt::format("probe energy {:.17g} is within {:.3e} of the spectrum", energy, dist),
        dist);
  }
  return dist;
}

}  // namespace

double distance_to_spectrum(const SymmetricOperator& op, double energy,
                            const ResolventOptions& options) {
  const BandedLU lu(op, energy);
  return distance_with(lu, static_cast<Index>(op.size()), energy, options);
}

double resolvent_block_norm(const ResolventBlockQuery& query,
                            const ResolventOptions& options) {
  if (query.op == nullptr) throw InvalidArgument("resolvent query without operator");
  const SymmetricOperator& op = *query.op;
  const std::size_t n = op.size();
  check_mask(query.mask_in, n, "mask_in");
  check_mask(query.mask_out, n, "mask_out");
  const BandedLU lu(op, query.energy);
  distance_with(lu, static_cast<Index>(n), query.energy, options);
  if (query.mask_in.empty() || query.mask_out.empty()) return 0.0;

  // B = R_out (H-E)^{-1} E_in on R^{|in|}; (H-E)^{-1} is symmetric, so
  // B^T = R_in (H-E)^{-1} E_out and ||B||^2 = lambda_max(B^T B).
  VectorXd full(static_cast<Index>(n));
  const LinearMap btb = [&](const VectorXd& x, VectorXd& y) {
    full.setZero();
    for (std::size_t i = 0; i < query.mask_in.size(); ++i)
      full(static_cast<Index>(query.mask_in[i])) = x(static_cast<Index>(i));
    lu.solve(full);
    VectorXd out(static_cast<Index>(query.mask_out.size()));
    for (std::size_t i = 0; i < query.mask_out.size(); ++i)
      out(static_cast<Index>(i)) = full(static_cast<Index>(query.mask_out[i]));
    full.setZero();
    for (std::size_t i = 0; i < query.mask_out.size(); ++i)
      full(static_cast<Index>(query.mask_out[i])) = out(static_cast<Index>(i));
    lu.solve(full);
    y.resize(x.size());
    for (std::size_t i = 0; i < query.mask_in.size(); ++i)
      y(static_cast<Index>(i)) = full(static_cast<Index>(query.mask_in[i]));
  };
  ResolventOptions inner = options;
  // Squared singular values: halve the relative target.
  inner.rel_tol = 0.5 * options.rel_tol;
  return std::sqrt(lanczos_extreme(btb, static_cast<Index>(query.mask_in.size()), inner));
}

ShiftedNorm resolvent_block_norm_shifted(ResolventBlockQuery query, double eps_shift,
                                         const ResolventOptions& options) {
  const double requested = query.energy;
  try {
    return {resolvent_block_norm(query, options), requested, 0.0};
  } catch (const SpectralCollision&) {
    if (eps_shift == 0.0) throw;
  }
  query.energy = requested + eps_shift;
  return {resolvent_block_norm(query, options), query.energy, eps_shift};
}

}  // namespace bosloc
