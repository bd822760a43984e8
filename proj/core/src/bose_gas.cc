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

#include "bosloc/bose_gas.h"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <fmt/format.h>

#include "bosloc/error.h"

namespace bosloc {
namespace {

// Volume of the unit ball in dimension d.
double unit_ball_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
  }
  throw InvalidArgument("dimension must be 1, 2 or 3");
}

// Free density of states per unit volume for -1/2 Laplacian:
// N(e)/V = w_d (2e)^{d/2} / (2 pi)^d.
double free_dos(int dim, double e) {
  if (e <= 0.0) return 0.0;
  const double d = dim;
  return unit_ball_volume(dim) * d * std::pow(2.0, 0.5 * d) * std::pow(e, 0.5 * d - 1.0) /
         (2.0 * std::pow(2.0 * std::numbers::pi, d));
}

struct DensityEvaluator {
  std::span<const double> energies;
  double volume;
  int dim;
  double beta;
  TailSpec tail;

  // Total density with mu_eff = E_1 - gap; differences E_i - E_1 stay exact.
  double levels(double gap) const {
    double sum = 0.0;
    const double e1 = energies.front();
    for (double e : energies) sum += 1.0 / std::expm1(beta * ((e - e1) + gap));
    return sum / volume;
  }
  double tail_density(double gap) const {
    if (tail.model == TailModel::kNone) return 0.0;
    return weyl_tail_density(dim, energies.back(), tail.potential_mean, beta,
                             energies.front() - gap);
  }
  double total(double gap) const { return levels(gap) + tail_density(gap); }
};

}  // namespace

void GasParameters::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
  if (!(rho_bar > 0.0) || !std::isfinite(rho_bar))
    throw InvalidArgument("rho_bar must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("lambda must be non-negative");
}

std::string to_string(TailModel model) {
  return model == TailModel::kWeyl ? "weyl" : "none";
}

TailModel parse_tail_model(const std::string& name) {
  if (name == "none") return TailModel::kNone;
  if (name == "weyl") return TailModel::kWeyl;
  throw ConfigError(fmt::format("unknown tail model '{}' (expected none or weyl)", name));
}

std::vector<double> occupations(std::span<const double> energies, double volume,
                                double beta, double mu_effective) {
  if (energies.empty()) throw InvalidArgument("occupations of an empty spectrum");
  if (!(mu_effective < energies.front())) {
    throw InvalidArgument(fmt::format("mu_effective {} must lie below E_1 = {}", mu_effective,
                                      energies.front()));
  }
  std::vector<double> rho(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    rho[i] = 1.0 / (volume * std::expm1(beta * (energies[i] - mu_effective)));
  }
  return rho;
}

std::vector<double> occupations(const Spectrum& spectrum, double beta, double mu_effective) {
  return occupations(spectrum.energies, spectrum.grid.volume(), beta, mu_effective);
}

double weyl_tail_density(int dim, double cutoff, double potential_mean, double beta,
                         double mu_effective) {
  // Integrate dN/dE * bose(E) over E > cutoff with E = potential_mean + e.
  const double e0 = std::max(cutoff - potential_mean, 0.0);
  const double x0 = potential_mean + e0 - mu_effective;
  if (!(x0 > 0.0)) throw InvalidArgument("Weyl tail cutoff below mu_effective");
  auto integrand = [&](double t) {
    const double bose = 1.0 / std::expm1(beta * (x0 + t));
    return free_dos(dim, e0 + t) * bose;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

OccupationProfile solve_chemical_potential(std::span<const double> energies, double volume,
                                           int dim, const GasParameters& params,
                                           const TailSpec& tail) {
  params.validate();
  if (energies.empty()) throw InvalidArgument("chemical potential of an empty spectrum");
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (energies[i] < energies[i - 1]) throw InvalidArgument("energies must be ascending");
  }
  const DensityEvaluator eval{energies, volume, dim, params.beta, tail};
  const double target = params.rho_bar;
  const double e1 = energies.front();

  // The density is strictly decreasing in the gap E_1 - mu_eff.
  double hi = 1.0;
  while (eval.total(hi) >= target) {
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("cannot bracket the chemical potential from below");
  }
  double lo = 1e-15 * std::max(1.0, std::abs(e1));
  if (eval.total(lo) < target) {
    throw NumericalError("density target not reachable below E_1");
  }
  if (hi <= lo) hi = 2.0 * lo;
  double gap = lo;
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 4000; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double r = eval.total(mid) - target;
    if (std::abs(r) < std::abs(residual)) {
      residual = r;
      gap = mid;
    }
    if (std::abs(r) < kDensityTolerance * target) break;
    if (r > 0.0) lo = mid; else hi = mid;
    if (hi / lo - 1.0 < 4 * std::numeric_limits<double>::epsilon()) break;
  }
  if (!(std::abs(residual) < 1e-10 * target)) {
    throw NumericalError(fmt::format("chemical potential bisection stalled (residual {:.3e})",
                                     residual));
  }
  OccupationProfile p;
  p.params = params;
  p.volume = volume;
  p.tail_model = tail.model;
  p.mu_effective = e1 - gap;
  p.mu = p.mu_effective + params.lambda * params.rho_bar;
  p.energies.assign(energies.begin(), energies.end());
  p.densities.resize(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    p.densities[i] = 1.0 / (volume * std::expm1(params.beta * ((energies[i] - e1) + gap)));
  }
  p.tail_density = eval.tail_density(gap);
  if (p.tail_density > kMaxTailFraction * target) {
    throw NumericalError(fmt::format(
        "tail density {:.3e} exceeds {}% of rho_bar; increase the number of levels",
        p.tail_density, 100 * kMaxTailFraction));
  }
  return p;
}

OccupationProfile solve_chemical_potential(const Spectrum& spectrum,
                                           const GasParameters& params,
                                           const TailSpec& tail) {
  return solve_chemical_potential(spectrum.energies, spectrum.grid.volume(),
                                  spectrum.grid.dim, params, tail);
}

double condensate_band_density(std::span<const double> densities,
                               std::span<const double> energies, double delta) {
  if (densities.size() != energies.size())
    throw InvalidArgument("densities and energies are not aligned");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (energies[i] <= delta) sum += densities[i];
  }
  return sum;
}

}  // namespace bosloc
