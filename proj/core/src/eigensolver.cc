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

#include "bosloc/eigensolver.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "bosloc/banded.h"
#include "bosloc/error.h"
#include "bosloc/philox.h"
#include "lapack.h"

namespace bosloc {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double residual_tolerance(double tol, double top_energy) {
  return tol * std::max(1.0, top_energy);
}

// Scales orthonormal (Euclidean) columns to the weighted normalisation,
// sorts ascending and fixes signs.
Spectrum finish(const SymmetricOperator& op, std::vector<double> energies,
                MatrixXd vectors) {
  const Index m = vectors.cols();
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return energies[static_cast<std::size_t>(a)] < energies[static_cast<std::size_t>(b)];
  });
  Spectrum s;
  s.grid = op.grid();
  s.energies.resize(static_cast<std::size_t>(m));
  s.eigenfunctions.resize(vectors.rows(), m);
  for (Index j = 0; j < m; ++j) {
    s.energies[static_cast<std::size_t>(j)] = energies[static_cast<std::size_t>(order[j])];
    s.eigenfunctions.col(j) = vectors.col(order[j]);
  }
  fix_signs(s.eigenfunctions);
  // Residuals on the Euclidean-normalised vectors equal the weighted
  // residuals of the weighted-normalised eigenfunctions.
  MatrixXd hv(vectors.rows(), m);
  op.apply(s.eigenfunctions, hv);
  s.residuals.resize(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    s.residuals[static_cast<std::size_t>(j)] =
        (hv.col(j) - s.energies[static_cast<std::size_t>(j)] * s.eigenfunctions.col(j))
            .norm();
  }
  s.eigenfunctions /= std::sqrt(op.grid().cell_measure());
  return s;
}

void check_residuals(const Spectrum& s, double tol, const char* path) {
  const double limit = residual_tolerance(tol, s.energies.back());
  for (double r : s.residuals) {
    if (!(r <= limit)) {
      throw NumericalError(
          fmt::format("{} eigensolver: residual {:.3e} exceeds tolerance {:.3e}", path, r,
                      limit),
          s.residuals);
    }
  }
}

Spectrum dense_eigenpairs(const SymmetricOperator& op, std::size_t m) {
  const int n = static_cast<int>(op.size());
  const int il = 1;
  const int iu = static_cast<int>(m);
  const double vl = 0.0, vu = 0.0, abstol = 0.0;
  int found = 0;
  int info = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  MatrixXd z(n, static_cast<Index>(m));
  std::vector<int> isuppz(2 * static_cast<std::size_t>(std::max<std::size_t>(m, 1)));
  int lwork = -1, liwork = -1;
  double wq = 0.0;
  int iwq = 0;
  const int ldz = n;
  if (op.grid().dim == 1) {
    std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) d[i] = op.diagonal(static_cast<std::size_t>(i));
    for (int i = 0; i + 1 < n; ++i) e[i] = op.coupling();
    dstevr_("V", "I", &n, d.data(), e.data(), &vl, &vu, &il, &iu, &abstol, &found,
            w.data(), z.data(), &ldz, isuppz.data(), &wq, &lwork, &iwq, &liwork, &info,
            1, 1);
    lwork = static_cast<int>(wq);
    liwork = iwq;
    std::vector<double> work(static_cast<std::size_t>(lwork));
    std::vector<int> iwork(static_cast<std::size_t>(liwork));
    dstevr_("V", "I", &n, d.data(), e.data(), &vl, &vu, &il, &iu, &abstol, &found,
            w.data(), z.data(), &ldz, isuppz.data(), work.data(), &lwork, iwork.data(),
            &liwork, &info, 1, 1);
  } else {
    MatrixXd a = op.to_dense();
    const int lda = n;
    dsyevr_("V", "I", "L", &n, a.data(), &lda, &vl, &vu, &il, &iu, &abstol, &found,
            w.data(), z.data(), &ldz, isuppz.data(), &wq, &lwork, &iwq, &liwork, &info,
            1, 1, 1);
    lwork = static_cast<int>(wq);
    liwork = iwq;
    std::vector<double> work(static_cast<std::size_t>(lwork));
    std::vector<int> iwork(static_cast<std::size_t>(liwork));
    dsyevr_("V", "I", "L", &n, a.data(), &lda, &vl, &vu, &il, &iu, &abstol, &found,
            w.data(), z.data(), &ldz, isuppz.data(), work.data(), &lwork, iwork.data(),
            &liwork, &info, 1, 1, 1);
  }
  if (info != 0 || found != static_cast<int>(m)) {
    throw NumericalError(fmt::format(
        "dense eigensolver failed (info = {}, found {} of {} pairs)", info, found, m));
  }
  w.resize(m);
  return finish(op, std::move(w), std::move(z));
}

// Column norms of a block.
VectorXd column_norms(const MatrixXd& x) { return x.colwise().norm().transpose(); }

// Shift-invert block Krylov eigensolver for the lowest eigenpairs of H.
//
// T = H^{-1} (H is positive definite for v >= 0) is applied through a banded
// Cholesky factorisation. The basis Q is expanded block-wise with W = T Q
// stored alongside, so the projected matrix Q^T T Q is exact and Rayleigh-
// Ritz can be performed at any point. When the basis is full it is thick-
// restarted onto the wanted Ritz vectors (which also locks the converged
// ones: every later block is orthogonalised against them).
class BlockKrylovSolver {
 public:
  BlockKrylovSolver(const SymmetricOperator& op, std::size_t m, double tol,
                    const EigenOptions& opts)
      : op_(op),
        chol_(op, 0.0),
        n_(static_cast<Index>(op.size())),
        m_(static_cast<Index>(m)),
        tol_(tol),
        opts_(opts),
        stream_(opts.seed, 0x6b72796c6f76ULL) {
    b_ = std::clamp<Index>(opts.block_size, 1, n_);
    p_ = std::min<Index>(n_, m_ + std::max<Index>(b_, (m_ + 3) / 4));
    kmax_ = std::min<Index>(n_, std::max<Index>(2 * p_ + 2 * b_, p_ + 8 * b_));
    q_.resize(n_, kmax_);
    w_.resize(n_, kmax_);
    a_.setZero(kmax_, kmax_);
  }

  Spectrum solve() {
    MatrixXd x(n_, b_);
    fill_random(x);
    append(x);
    Index last_rr = 0;
    const Index rr_interval = std::max<Index>(b_, p_ / 4);
    std::vector<double> last_residuals;
    for (int iter = 0; iter < opts_.max_iterations; ++iter) {
      const bool full = k_ == n_;
      const bool must_restart = k_ + 1 > kmax_ - 0 && !full;
      if ((k_ >= std::min<Index>(p_ + b_, kmax_) &&
           (k_ - last_rr >= rr_interval || must_restart || k_ + b_ > kmax_)) ||
          full) {
        last_rr = k_;
        rayleigh_ritz();
        last_residuals = wanted_residuals();
        const double limit = residual_tolerance(tol_, ritz_energy(m_ - 1));
        const bool done = std::all_of(last_residuals.begin(), last_residuals.end(),
                                      [&](double r) { return r <= limit; });
        if (done || full) {
          if (!done) {
            throw NumericalError("iterative eigensolver exhausted the space", last_residuals);
          }
          return finalize();
        }
      }
      // Next block: T applied to the newest basis block, orthogonalised
      // against the current basis.
      MatrixXd next = w_.middleCols(k_ - last_block_, last_block_);
      project_out(next, k_);
      if (k_ + b_ > kmax_) {
        if (last_rr != k_) {
          last_rr = k_;
          rayleigh_ritz();
        }
        restart();
        last_rr = k_;
      }
      append(next);
    }
    throw NumericalError(
        fmt::format("iterative eigensolver did not converge in {} block iterations",
                    opts_.max_iterations),
        last_residuals);
  }

 private:
  void fill_random(Eigen::Ref<MatrixXd> x) {
    for (Index j = 0; j < x.cols(); ++j)
      for (Index i = 0; i < x.rows(); ++i) x(i, j) = stream_.normal();
  }

  void project_out(MatrixXd& x, Index k) const {
    if (k == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
      const MatrixXd c = q_.leftCols(k).transpose() * x;
      x.noalias() -= q_.leftCols(k) * c;
    }
  }

  // Orthonormalises `x` against the basis and itself, appends it, applies T
  // and extends the projected matrix.
  void append(MatrixXd x) {
    const Index c = std::min<Index>(x.cols(), n_ - k_);
    if (c <= 0) return;
    x.conservativeResize(Eigen::NoChange, c);
    VectorXd before = column_norms(x);
    project_out(x, k_);
    for (Index j = 0; j < c; ++j) {
      for (int attempt = 0;; ++attempt) {
        for (int pass = 0; pass < 2; ++pass) {
          for (Index i = 0; i < j; ++i) x.col(j) -= x.col(i).dot(x.col(j)) * x.col(i);
        }
        const double nrm = x.col(j).norm();
        if (nrm > 1e-8 * before(j) && nrm > 0.0) {
          x.col(j) /= nrm;
          break;
        }
        if (attempt >= 4) throw NumericalError("block orthogonalisation broke down");
        // The Krylov space became (nearly) invariant: continue with a fresh
        // random direction.
        VectorXd r(n_);
        for (Index i = 0; i < n_; ++i) r(i) = stream_.normal();
        before(j) = r.norm();
        for (int pass = 0; pass < 2; ++pass) {
          if (k_ > 0) r -= q_.leftCols(k_) * (q_.leftCols(k_).transpose() * r);
        }
        x.col(j) = r;
      }
    }
    q_.middleCols(k_, c) = x;
    MatrixXd tx = x;
    chol_.solve(tx);
    w_.middleCols(k_, c) = tx;
    const Index k_new = k_ + c;
    const MatrixXd g = q_.leftCols(k_new).transpose() * tx;
    a_.block(0, k_, k_new, c) = g;
    a_.block(k_, 0, c, k_new) = g.transpose();
    // Keep the diagonal block exactly symmetric.
    const MatrixXd diag = 0.5 * (g.bottomRows(c) + g.bottomRows(c).transpose());
    a_.block(k_, k_, c, c) = diag;
    k_ = k_new;
    last_block_ = c;
    ++expansions_;
  }

  void rayleigh_ritz() {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(a_.topLeftCorner(k_, k_));
    if (es.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz eigensolve failed");
    // Largest theta first.
    const Index keep = std::min(p_, k_);
    theta_ = es.eigenvalues().tail(keep).reverse();
    s_ = es.eigenvectors().rightCols(keep).rowwise().reverse();
  }

  double ritz_energy(Index j) const { return 1.0 / theta_(j); }

  std::vector<double> wanted_residuals() {
    const Index count = std::min(m_, theta_.size());
    const MatrixXd y = q_.leftCols(k_) * s_.leftCols(count);
    MatrixXd hy(n_, count);
    op_.apply(y, hy);
    std::vector<double> res(static_cast<std::size_t>(count));
    for (Index j = 0; j < count; ++j) {
      res[static_cast<std::size_t>(j)] = (hy.col(j) - ritz_energy(j) * y.col(j)).norm();
    }
    return res;
  }

  void restart() {
    const Index keep = theta_.size();
    const MatrixXd y = q_.leftCols(k_) * s_;
    const MatrixXd ty = w_.leftCols(k_) * s_;
    q_.leftCols(keep) = y;
    w_.leftCols(keep) = ty;
    a_.setZero();
    const MatrixXd g = y.transpose() * ty;
    a_.topLeftCorner(keep, keep) = 0.5 * (g + g.transpose());
    k_ = keep;
    last_block_ = 0;
  }

  Spectrum finalize() {
    const MatrixXd y = q_.leftCols(k_) * s_.leftCols(m_);
    std::vector<double> energies(static_cast<std::size_t>(m_));
    for (Index j = 0; j < m_; ++j) energies[static_cast<std::size_t>(j)] = ritz_energy(j);
    return finish(op_, std::move(energies), y);
  }

  const SymmetricOperator& op_;
  BandedCholesky chol_;
  Index n_, m_, b_ = 1, p_ = 1, kmax_ = 1;
  double tol_;
  EigenOptions opts_;
  PhiloxStream stream_;
  MatrixXd q_, w_, a_, s_;
  VectorXd theta_;
  Index k_ = 0;
  Index last_block_ = 0;
  int expansions_ = 0;
};

}  // namespace

void fix_signs(Eigen::Ref<Eigen::MatrixXd> vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    auto col = vectors.col(j);
    const double scale = col.cwiseAbs().maxCoeff();
    for (Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-10 * scale) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

double eigen_residual(const SymmetricOperator& op, std::span<const double> phi,
                      double energy) {
  std::vector<double> hphi(phi.size());
  op.apply(phi, hphi);
  for (std::size_t i = 0; i < phi.size(); ++i) hphi[i] -= energy * phi[i];
  return norm_l2(op.grid(), hphi);
}

Spectrum lowest_eigenpairs(const SymmetricOperator& op, std::size_t m, double tol,
                           const EigenOptions& options) {
  if (m < 1 || m > op.size()) {
    throw InvalidArgument(fmt::format("requested {} eigenpairs of a {}-point operator", m,
                                      op.size()));
  }
  if (!(tol > 0.0)) throw InvalidArgument("eigensolver tolerance must be positive");
  bool dense = false;
  switch (options.method) {
    case SolverMethod::kAuto: dense = op.size() <= options.dense_cutoff; break;
    case SolverMethod::kDense: dense = true; break;
    case SolverMethod::kIterative: dense = false; break;
  }
  if (dense) {
    Spectrum s = dense_eigenpairs(op, m);
    check_residuals(s, tol, "dense");
    return s;
  }
  BlockKrylovSolver solver(op, m, tol, options);
  Spectrum s = solver.solve();
  check_residuals(s, tol, "iterative");
  return s;
}

}  // namespace bosloc
