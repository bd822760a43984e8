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

#ifndef BOSLOC_LOCALIZATION_H_
#define BOSLOC_LOCALIZATION_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bosloc/eigensolver.h"
#include "bosloc/grid.h"
#include "bosloc/potential.h"
#include "bosloc/resolvent.h"

namespace bosloc {

// Davies sup-norm check allowance and the resolution below which it is
// reported but not asserted.
inline constexpr double kDaviesTolerance = 0.05;
inline constexpr double kDaviesMinResolution = 8.0;

// l^{-d/2} h^d sum |phi|.
double l1_metric(const Grid& grid, std::span<const double> phi);

// h^d sum phi^4.
double inverse_participation_ratio(const Grid& grid, std::span<const double> phi);

struct DaviesResult {
  double ratio = 0.0;  // sup|phi| / ((e/pi)^{d/4} E^{d/4})
  bool exempt = false;
  bool pass = true;    // ratio <= 1 + tol, or exempt
};

DaviesResult davies_check(double sup_norm, double energy, int dim, double resolution,
                          double tol = kDaviesTolerance);

struct EigenfunctionDiagnostics {
  double energy = 0.0;
  double l1_metric = 0.0;
  double sup_norm = 0.0;
  double ipr = 0.0;
  DaviesResult davies;
};

struct LocalizationReport {
  Grid grid;
  std::vector<EigenfunctionDiagnostics> entries;
};

LocalizationReport localization_report(const Spectrum& spectrum, std::size_t count);

// Constants for the multiscale schedule.
struct ScheduleConstants {
  double delta = 0.1;
  double zeta = 0.0;  // 0 selects 1.2 (2d + 1) / (2 delta)

  double resolved_zeta(int dim) const;
  // 2 - 4d / (4d + zeta).
  double alpha_max(int dim) const;
};

struct MultiscaleSchedule {
  int l1 = 3;
  double alpha = 1.5;
  int dim = 1;
  double zeta = 0.0;
  double alpha_max = 2.0;
  std::vector<int> lengths;

  // 1 - l_k^{-2 zeta}.
  double good_probability_reference(std::size_t k) const;
};

// lengths[0] = l1; lengths[k] = smallest odd integer >= lengths[k-1]^alpha.
MultiscaleSchedule multiscale_schedule(int l1, double alpha, int count, int dim = 1,
                                       ScheduleConstants constants = {});

struct BoxMasks {
  Grid box;
  std::vector<std::size_t> interior;  // indices into `box`
  std::vector<std::size_t> collar;
  int interior_points_per_side = 0;
};

// Sub-box of side l_k centred on a lattice point, its interior cube of
// side about l_k / 3 (odd point count) and the collar outside the
// concentric box of side l_k - 2.
BoxMasks good_box_masks(const Grid& parent, const std::array<int, 3>& center, int l_k);

struct GoodBoxResult {
  bool is_good = false;
  double norm = 0.0;
  double threshold = 0.0;  // exp(-gamma l_k)
  double energy = 0.0;     // probe energy used
  double eps_shift = 0.0;
  int interior_points_per_side = 0;
};

GoodBoxResult good_box_test(const PotentialField& field, const std::array<int, 3>& center,
                            int l_k, double energy, double gamma,
                            double eps_shift = kDefaultEpsShift);

struct DecayCheck {
  double lhs = 0.0;       // ||chi_int phi||
  double rhs_norm = 0.0;  // ||chi_out (h_box - E)^{-1} chi_int||
  double eps_shift = 0.0;

  double ratio() const { return rhs_norm > 0.0 ? lhs / rhs_norm : 0.0; }
};

DecayCheck decay_inequality_check(std::span<const double> phi, double energy,
                                  const PotentialField& field,
                                  const std::array<int, 3>& center, int l_k,
                                  double eps_shift = kDefaultEpsShift);

struct IdsCurve {
  double box_side = 0.0;
  std::vector<double> energies;
  std::vector<double> nu_hat;
  std::vector<double> stderr_;
  std::size_t realizations = 0;
};

// Samples must share the box size; each sample must either be complete or
// have E_m above the largest grid energy.
IdsCurve ids_estimate(const std::vector<Spectrum>& samples, std::span<const double> energy_grid);

// eps_1 + arithmetic mean of v over grid points; exact for constant v.
double e1_upper_bound(const PotentialField& field);
// eps_1 + (psi_1^2, v): min-max with the kinetic ground mode.
double e1_minmax_bound(const PotentialField& field);
// eps_1 + (2/l)^d h^d sum v, using the sup bound of psi_1.
double e1_sup_bound(const PotentialField& field);

struct WeakScalingPrediction {
  double gamma = 0.0;               // alpha_n / (2 + alpha_n)
  double predicted_exponent = 0.0;  // -2 gamma
  double reference_level = 0.0;     // D_i of -1/2 Laplacian + c_n |x|^{alpha_n}
  double reference_side = 0.0;
  int reference_resolution = 0;
};

struct ReferenceSolveOptions {
  double rel_tol = 1e-4;
  double initial_side = 8.0;
  int initial_resolution = 16;
  int max_refinements = 10;
};

WeakScalingPrediction weak_scaling_predictor(const WeakPotentialSpec& spec, int i,
                                             const ReferenceSolveOptions& options = {});

}  // namespace bosloc

#endif  // BOSLOC_LOCALIZATION_H_
