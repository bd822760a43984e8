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

#include "bosloc/localization.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "bosloc/error.h"
#include "bosloc/hamiltonian.h"

namespace bosloc {
namespace {

double ground_kinetic_energy(const Grid& grid) {
  return grid.dim * kinetic_energy_1d(grid, 1);
}

// Radial power potential c |x|^alpha on a centred grid.
PotentialField power_potential(const Grid& grid, double c, double alpha) {
  std::vector<double> v(grid.size());
  for (std::size_t f = 0; f < v.size(); ++f) {
    const auto m = grid.unflatten(f);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double x = grid.coordinate(m[a], a);
      r2 += x * x;
    }
    v[f] = c * std::pow(std::sqrt(r2), alpha);
  }
  return explicit_potential(grid, std::move(v), "power");
}

double reference_level(int dim, double side, int resolution, double c, double alpha, int i) {
  const Grid grid = grid_with_resolution(dim, side, resolution);
  const SymmetricOperator op = assemble_hamiltonian(grid, power_potential(grid, c, alpha));
  const Spectrum s = lowest_eigenpairs(op, static_cast<std::size_t>(i), 1e-10);
  return s.energies.back();
}

}  // namespace

double l1_metric(const Grid& grid, std::span<const double> phi) {
  return norm_l1(grid, phi) / std::pow(grid.side, 0.5 * grid.dim);
}

double inverse_participation_ratio(const Grid& grid, std::span<const double> phi) {
  double s = 0.0;
  for (double x : phi) s += x * x * x * x;
  return grid.cell_measure() * s;
}

DaviesResult davies_check(double sup_norm, double energy, int dim, double resolution,
                          double tol) {
  DaviesResult r;
  const double q = 0.25 * dim;
  r.ratio = sup_norm / (std::pow(std::numbers::e / std::numbers::pi, q) * std::pow(energy, q));
  r.exempt = resolution < kDaviesMinResolution;
  r.pass = r.exempt || r.ratio <= 1.0 + tol;
  return r;
}

LocalizationReport localization_report(const Spectrum& spectrum, std::size_t count) {
  count = std::min(count, spectrum.size());
  LocalizationReport report;
  report.grid = spectrum.grid;
  report.entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto phi = spectrum.eigenfunction(i);
    EigenfunctionDiagnostics d;
    d.energy = spectrum.energies[i];
    d.l1_metric = l1_metric(spectrum.grid, phi);
    d.sup_norm = norm_sup(phi);
    d.ipr = inverse_participation_ratio(spectrum.grid, phi);
    d.davies = davies_check(d.sup_norm, d.energy, spectrum.grid.dim,
                            spectrum.grid.resolution());
    report.entries.push_back(d);
  }
  return report;
}

double ScheduleConstants::resolved_zeta(int dim) const {
  if (zeta > 0.0) return zeta;
  return 1.2 * (2.0 * dim + 1.0) / (2.0 * delta);
}

double ScheduleConstants::alpha_max(int dim) const {
  return 2.0 - 4.0 * dim / (4.0 * dim + resolved_zeta(dim));
}

double MultiscaleSchedule::good_probability_reference(std::size_t k) const {
  return 1.0 - std::pow(static_cast<double>(lengths.at(k)), -2.0 * zeta);
}

MultiscaleSchedule multiscale_schedule(int l1, double alpha, int count, int dim,
                                       ScheduleConstants constants) {
  if (l1 < 3 || l1 % 2 == 0) throw InvalidArgument("l1 must be an odd integer >= 3");
  if (count < 1) throw InvalidArgument("schedule needs at least one length");
  if (!(constants.delta > 0.0 && constants.delta < 1.0 / 7.0)) {
    throw InvalidArgument("delta must lie in (0, 1/7)");
  }
  MultiscaleSchedule s;
  s.l1 = l1;
  s.alpha = alpha;
  s.dim = dim;
  s.zeta = constants.resolved_zeta(dim);
  s.alpha_max = constants.alpha_max(dim);
  if (!(alpha > 1.0 && alpha <= s.alpha_max)) {
    throw InvalidArgument(
        fmt::format("alpha {} outside (1, {:.6f}] for zeta = {}", alpha, s.alpha_max, s.zeta));
  }
  s.lengths.push_back(l1);
  for (int k = 1; k < count; ++k) {
    double p = std::pow(static_cast<double>(s.lengths.back()), alpha);
    // Exact integer powers (e.g. 9^1.5) must not round up past themselves.
    if (std::abs(p - std::round(p)) <= 1e-9 * p) p = std::round(p);
    if (p > 1e9) throw InvalidArgument("schedule length overflow");
    long next = static_cast<long>(std::ceil(p));
    if (next % 2 == 0) ++next;
    if (!(next >= p && next <= p + 6.0)) {
      throw NumericalError(fmt::format("schedule constraint violated at k = {}", k));
    }
    s.lengths.push_back(static_cast<int>(next));
  }
  return s;
}

BoxMasks good_box_masks(const Grid& parent, const std::array<int, 3>& center, int l_k) {
  if (l_k < 3) throw InvalidArgument("good-box side must be at least 3");
  std::array<double, 3> c = {0.0, 0.0, 0.0};
  for (int a = 0; a < parent.dim; ++a) c[a] = center[a];
  BoxMasks masks;
  masks.box = sub_grid(parent, c, static_cast<double>(l_k));
  const Grid& box = masks.box;
  const int n = box.points_per_side;
  if (n % 2 == 0) throw InvalidArgument("good-box centre is not a grid point");
  const int mid = (n - 1) / 2;
  int cnt = static_cast<int>(std::floor(l_k / (3.0 * box.spacing) + 1e-9));
  if (cnt % 2 == 0) --cnt;
  cnt = std::max(cnt, 1);
  masks.interior_points_per_side = cnt;
  const int half = (cnt - 1) / 2;
  const double collar_edge = 0.5 * (l_k - 2) - 1e-9 * box.spacing;
  for (std::size_t f = 0; f < box.size(); ++f) {
    const auto m = box.unflatten(f);
    bool inside = true;
    double dist = 0.0;
    for (int a = 0; a < box.dim; ++a) {
      inside = inside && std::abs(m[a] - mid) <= half;
      dist = std::max(dist, std::abs(box.coordinate(m[a], a) - c[a]));
    }
    if (inside) masks.interior.push_back(f);
    if (dist >= collar_edge) masks.collar.push_back(f);
  }
  return masks;
}

GoodBoxResult good_box_test(const PotentialField& field, const std::array<int, 3>& center,
                            int l_k, double energy, double gamma, double eps_shift) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  const BoxMasks masks = good_box_masks(field.grid, center, l_k);
  const PotentialField local = restrict_potential(field, masks.box);
  const SymmetricOperator op = assemble_hamiltonian(masks.box, local);
  const ShiftedNorm r =
      resolvent_block_norm_shifted({&op, energy, masks.interior, masks.collar}, eps_shift);
  GoodBoxResult out;
  out.norm = r.norm;
  out.energy = r.energy;
  out.eps_shift = r.eps_shift;
  out.threshold = std::exp(-gamma * l_k);
  out.is_good = r.norm <= out.threshold;
  out.interior_points_per_side = masks.interior_points_per_side;
  return out;
}

DecayCheck decay_inequality_check(std::span<const double> phi, double energy,
                                  const PotentialField& field,
                                  const std::array<int, 3>& center, int l_k,
                                  double eps_shift) {
  if (phi.size() != field.grid.size()) throw InvalidArgument("eigenfunction grid mismatch");
  const BoxMasks masks = good_box_masks(field.grid, center, l_k);
  const std::vector<std::size_t> embed = embed_indices(field.grid, masks.box);
  double s = 0.0;
  for (std::size_t i : masks.interior) {
    const double x = phi[embed[i]];
    s += x * x;
  }
  DecayCheck out;
  out.lhs = std::sqrt(field.grid.cell_measure() * s);
  const PotentialField local = restrict_potential(field, masks.box);
  const SymmetricOperator op = assemble_hamiltonian(masks.box, local);
  const ShiftedNorm r =
      resolvent_block_norm_shifted({&op, energy, masks.interior, masks.collar}, eps_shift);
  out.rhs_norm = r.norm;
  out.eps_shift = r.eps_shift;
  return out;
}

IdsCurve ids_estimate(const std::vector<Spectrum>& samples, std::span<const double> energy_grid) {
  if (samples.empty()) throw InvalidArgument("IDS estimate needs at least one sample");
  IdsCurve c;
  c.box_side = samples.front().grid.side;
  c.realizations = samples.size();
  c.energies.assign(energy_grid.begin(), energy_grid.end());
  if (!std::is_sorted(c.energies.begin(), c.energies.end())) {
    throw InvalidArgument("IDS energy grid must be ascending");
  }
  const double top = c.energies.empty() ? 0.0 : c.energies.back();
  for (const Spectrum& s : samples) {
    if (s.grid.side != c.box_side || s.grid.dim != samples.front().grid.dim) {
      throw InvalidArgument("IDS samples must share the box");
    }
    const bool complete = s.size() == s.grid.size();
    if (!complete && !(s.energies.back() > top)) {
      throw InvalidArgument(fmt::format(
          "IDS sample covers energies up to {:.6g} only; need more than {:.6g}",
          s.energies.back(), top));
    }
  }
  const double n = static_cast<double>(samples.size());
  for (double e : c.energies) {
    double sum = 0.0, sum_sq = 0.0;
    for (const Spectrum& s : samples) {
      const auto count = std::upper_bound(s.energies.begin(), s.energies.end(), e) -
                         s.energies.begin();
      const double nu = static_cast<double>(count) / s.grid.volume();
      sum += nu;
      sum_sq += nu * nu;
    }
    const double mean = sum / n;
    double se = 0.0;
    if (samples.size() > 1) {
      const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
      se = std::sqrt(var / n);
    }
    c.nu_hat.push_back(mean);
    c.stderr_.push_back(se);
  }
  return c;
}

double e1_upper_bound(const PotentialField& field) {
  return ground_kinetic_energy(field.grid) + potential_stats(field).mean;
}

double e1_minmax_bound(const PotentialField& field) {
  KineticMode ground;
  for (int a = 0; a < field.grid.dim; ++a) ground.index[a] = 1;
  const std::vector<double> psi = kinetic_mode_values(field.grid, ground);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) s += psi[i] * psi[i] * field.values[i];
  return ground_kinetic_energy(field.grid) + field.grid.cell_measure() * s;
}

double e1_sup_bound(const PotentialField& field) {
  double s = 0.0;
  for (double v : field.values) s += v;
  const double sup_sq = std::pow(2.0 / field.grid.side, field.grid.dim);
  return ground_kinetic_energy(field.grid) + sup_sq * field.grid.cell_measure() * s;
}

WeakScalingPrediction weak_scaling_predictor(const WeakPotentialSpec& spec_in, int i,
                                             const ReferenceSolveOptions& options) {
  WeakPotentialSpec spec = spec_in;
  spec.normalize();
  if (i < 1 || i > 8) throw InvalidArgument("reference level index must lie in 1..8");
  const WeakZero& zero = spec.dominant_zero();
  WeakScalingPrediction p;
  p.gamma = zero.alpha / (2.0 + zero.alpha);
  p.predicted_exponent = -2.0 * p.gamma;
  double side = options.initial_side;
  int res = options.initial_resolution;
  double d = reference_level(spec.dim, side, res, zero.c, zero.alpha, i);
  for (int step = 0; step < options.max_refinements; ++step) {
    const double d_side = reference_level(spec.dim, std::ceil(1.5 * side), res, zero.c, zero.alpha, i);
    const double d_res = reference_level(spec.dim, side, 2 * res, zero.c, zero.alpha, i);
    const bool side_ok = std::abs(d_side - d) <= options.rel_tol * d;
    const bool res_ok = std::abs(d_res - d) <= options.rel_tol * d;
    if (side_ok && res_ok) {
      p.reference_level = d_res;
      p.reference_side = side;
      p.reference_resolution = 2 * res;
      return p;
    }
    if (!side_ok) {
      side = std::ceil(1.5 * side);
      d = d_side;
    } else {
      res *= 2;
      d = d_res;
    }
  }
  throw NumericalError("reference level did not stabilise under box and grid refinement");
}

}  // namespace bosloc
