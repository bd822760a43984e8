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

#include "bosloc/fock_oracle.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <fmt/format.h>

#include "bosloc/error.h"
#include "bosloc/philox.h"

namespace bosloc {
namespace {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Depth-first walk over tuples with sum n_i <= n_max. Calls f(n, H).
template <typename F>
void for_each_state(const DiagonalModelSpec& spec, F&& f) {
  const std::size_t m = spec.levels();
  const double coupling = spec.lambda / (2.0 * spec.volume);
  std::vector<int> n(m, 0);
  // linear[d], quad[d]: contributions of levels < d.
  std::vector<double> linear(m + 1, 0.0), quad(m + 1, 0.0);
  std::vector<int> used(m + 1, 0);
  auto rec = [&](auto&& self, std::size_t d) -> void {
    if (d == m) {
      f(n, linear[m] + coupling * quad[m]);
      return;
    }
    const int room = spec.n_max - used[d];
    double cross = 0.0;  // sum_{j<d} a_dj n_j
    for (std::size_t j = 0; j < d; ++j) cross += spec.a(d, j) * n[j];
    const double add = spec.energies[d] - spec.mu;
    const double add_diag = spec.a(d, d);
    for (int k = 0; k <= room; ++k) {
      n[d] = k;
      linear[d + 1] = linear[d] + add * k;
      quad[d + 1] = quad[d] + 2.0 * k * cross + add_diag * k * static_cast<double>(k);
      used[d + 1] = used[d] + k;
      self(self, d + 1);
    }
    n[d] = 0;
  };
  rec(rec, 0);
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::string to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::kMeanField: return "mean-field";
    case InteractionKind::kSelf: return "self";
    case InteractionKind::kCustom: return "custom";
  }
  return "custom";
}

InteractionKind parse_interaction_kind(const std::string& name) {
  if (name == "mean-field") return InteractionKind::kMeanField;
  if (name == "self") return InteractionKind::kSelf;
  if (name == "custom") return InteractionKind::kCustom;
  throw ConfigError(fmt::format("unknown interaction '{}'", name));
}

double DiagonalModelSpec::a(std::size_t i, std::size_t j) const {
  switch (interaction) {
    case InteractionKind::kMeanField: return 1.0;
    case InteractionKind::kSelf: return i == j ? 1.0 : 0.0;
    case InteractionKind::kCustom: return custom_matrix[i * levels() + j];
  }
  return 0.0;
}

void DiagonalModelSpec::validate() const {
  const std::size_t m = levels();
  if (m < 1 || m > static_cast<std::size_t>(kOracleMaxLevels)) {
    throw InvalidArgument(fmt::format("oracle supports 1..{} levels, got {}", kOracleMaxLevels, m));
  }
  if (n_max < 1 || n_max > kOracleMaxParticles) {
    throw InvalidArgument(fmt::format("n_max must lie in 1..{}", kOracleMaxParticles));
  }
  for (double e : energies)
    if (!std::isfinite(e)) throw InvalidArgument("oracle energies must be finite");
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  if (!(volume > 0.0)) throw InvalidArgument("volume must be positive");
  if (!std::isfinite(mu)) throw InvalidArgument("mu must be finite");
  if (interaction == InteractionKind::kCustom) {
    if (custom_matrix.size() != m * m) throw InvalidArgument("interaction matrix must be m x m");
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double v = custom_matrix[i * m + j];
        if (!(v >= 0.0) || v != custom_matrix[j * m + i]) {
          throw InvalidArgument("interaction matrix must be symmetric and non-negative");
        }
      }
    }
  }
}

std::uint64_t DiagonalModelSpec::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* p, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  for (double e : energies) mix(&e, sizeof e);
  for (double x : {beta, mu, lambda, volume}) mix(&x, sizeof x);
  const int kind = static_cast<int>(interaction);
  mix(&kind, sizeof kind);
  for (double x : custom_matrix) mix(&x, sizeof x);
  mix(&n_max, sizeof n_max);
  return h;
}

double truncation_tail_bound(const DiagonalModelSpec& spec, double min_energy,
                             double log_partition_shifted) {
  const std::size_t m = spec.levels();
  // H(n) >= g N + (lambda c / 2V) N^2 with N = sum n_i.
  double g = std::numeric_limits<double>::infinity();
  for (double e : spec.energies) g = std::min(g, e - spec.mu);
  double min_diag = std::numeric_limits<double>::infinity();
  double min_entry = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    min_diag = std::min(min_diag, spec.a(i, i));
    for (std::size_t j = 0; j < m; ++j) min_entry = std::min(min_entry, spec.a(i, j));
  }
  const double c = std::max(min_diag / static_cast<double>(m), min_entry);
  const double q = spec.lambda * c / (2.0 * spec.volume);
  if (q <= 0.0 && g <= 0.0) return std::numeric_limits<double>::infinity();
  const double md = static_cast<double>(m);
  // log of C(N+m-1, m-1) exp(-beta (b(N) - min_energy)) relative to Z.
  auto log_term = [&](double big_n) {
    return log_binomial(big_n + md - 1.0, md - 1.0) -
           spec.beta * (g * big_n + q * big_n * big_n - min_energy) - log_partition_shifted;
  };
  double total = 0.0;
  for (int big_n = spec.n_max + 1; big_n < 100000000; ++big_n) {
    const double nd = big_n;
    const double term = std::exp(log_term(nd));
    // Ratio of consecutive terms is non-increasing in N, so once it is below
    // one the remainder is bounded by a geometric series.
    const double ratio = std::exp(log_term(nd + 1.0) - log_term(nd));
    total += term;
    if (ratio < 1.0) {
      const double remainder = term * ratio / (1.0 - ratio);
      if (remainder <= 1e-3 * total || remainder < 1e-300) return total + remainder;
    }
  }
  return std::numeric_limits<double>::infinity();
}

GibbsResult enumerate_gibbs(const DiagonalModelSpec& spec) {
  spec.validate();
  const std::size_t m = spec.levels();
  double h_min = std::numeric_limits<double>::infinity();
  std::uint64_t states = 0;
  for_each_state(spec, [&](const std::vector<int>&, double h) {
    h_min = std::min(h_min, h);
    ++states;
  });
  CompensatedSum z, total, total_sq;
  std::vector<CompensatedSum> occ(m);
  for_each_state(spec, [&](const std::vector<int>& n, double h) {
    const double w = std::exp(-spec.beta * (h - h_min));
    z.add(w);
    int big_n = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (n[i] != 0) occ[i].add(w * n[i]);
      big_n += n[i];
    }
    total.add(w * big_n);
    total_sq.add(w * static_cast<double>(big_n) * big_n);
  });
  GibbsResult r;
  r.states = states;
  const double zs = z.value();
  r.log_partition = std::log(zs) - spec.beta * h_min;
  r.partition_value = std::exp(r.log_partition);
  r.mean_occupations.resize(m);
  for (std::size_t i = 0; i < m; ++i) r.mean_occupations[i] = occ[i].value() / zs;
  r.mean_total = total.value() / zs;
  r.mean_square_total = total_sq.value() / zs;
  r.tail_bound = truncation_tail_bound(spec, h_min, std::log(zs));
  if (!(r.tail_bound < kOracleTailTolerance)) {
    throw NumericalError(fmt::format(
        "discarded tail weight bound {:.3e} exceeds {:.0e}; increase n_max beyond {}",
        r.tail_bound, kOracleTailTolerance, spec.n_max));
  }
  return r;
}

MonotonicityReport monotonicity_certificate(const std::vector<DiagonalModelSpec>& specs,
                                            bool enforce) {
  MonotonicityReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const DiagonalModelSpec& spec : specs) {
    if (!std::is_sorted(spec.energies.begin(), spec.energies.end())) {
      throw InvalidArgument("monotonicity certificate needs ascending energies");
    }
    const GibbsResult r = enumerate_gibbs(spec);
    MonotonicityEntry e;
    e.spec_hash = spec.hash();
    e.occupations = r.mean_occupations;
    e.tail_bound = r.tail_bound;
    e.margin = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (double x : r.mean_occupations) scale = std::max(scale, x);
    for (std::size_t i = 0; i + 1 < e.occupations.size(); ++i) {
      e.margin = std::min(e.margin, e.occupations[i] - e.occupations[i + 1]);
    }
    if (e.occupations.size() < 2) e.margin = 0.0;
    // Exactly degenerate levels may differ by summation rounding only.
    e.monotone = e.margin >= -1e-12 * std::max(scale, 1.0);
    if (!e.monotone) {
      ++report.violations;
      if (enforce && spec.interaction != InteractionKind::kCustom) {
        throw NumericalError(fmt::format(
            "occupations not non-increasing (margin {:.3e}) for spec {:016x}", e.margin,
            e.spec_hash));
      }
    }
    report.min_margin = std::min(report.min_margin, e.margin);
    report.entries.push_back(std::move(e));
  }
  if (specs.empty()) report.min_margin = 0.0;
  return report;
}

std::vector<DiagonalModelSpec> random_diagonal_sweep(int count, int levels, std::uint64_t seed,
                                                     InteractionKind kind) {
  if (kind == InteractionKind::kCustom) throw InvalidArgument("sweep needs a named interaction");
  std::vector<DiagonalModelSpec> specs;
  for (int s = 0; s < count; ++s) {
    PhiloxStream stream(seed, static_cast<std::uint64_t>(s));
    DiagonalModelSpec spec;
    spec.interaction = kind;
    for (int i = 0; i < levels; ++i) spec.energies.push_back(stream.uniform());
    std::sort(spec.energies.begin(), spec.energies.end());
    spec.beta = 0.5 + 4.5 * stream.uniform();
    spec.lambda = 3.0 * stream.uniform();
    spec.mu = spec.energies.front() - (1.0 + stream.uniform()) / spec.beta;
    spec.n_max = 60;
    while (true) {
      // H_min <= H(0) = 0 and the shifted partition sum is >= 1, so this
      // over-estimates the bound enumerate_gibbs certifies.
      const double bound = truncation_tail_bound(spec, 0.0, 0.0);
      if (bound < 1e-3 * kOracleTailTolerance || spec.n_max >= kOracleMaxParticles) break;
      spec.n_max = std::min(kOracleMaxParticles, spec.n_max + 20);
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace bosloc
