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

#ifndef BOSLOC_STATISTICS_H_
#define BOSLOC_STATISTICS_H_

#include <span>
#include <vector>

namespace bosloc {

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of ln y on ln x. Needs at least 3 positive points.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

double median(std::vector<double> values);
double mean(std::span<const double> values);
// Unbiased sample standard deviation (0 for fewer than two values).
double sample_stddev(std::span<const double> values);

// Pairwise slopes (y_j - y_i) / (x_j - x_i), i < j, in index order.
std::vector<double> pairwise_slopes(std::span<const double> xs, std::span<const double> ys);
double theil_sen_slope(std::span<const double> xs, std::span<const double> ys);

// P(X >= k) for X ~ Binomial(n, 1/2).
double sign_test_p_value(int successes, int trials);

inline constexpr double kTrendSignificance = 0.05;
inline constexpr int kTrendMinScales = 5;

struct TrendTest {
  double theil_sen_slope = 0.0;  // on (ln l, ln median)
  int negative_pairs = 0;
  int pairs = 0;
  double p_value = 1.0;
  bool strictly_decreasing = false;
  bool enough_scales = false;
  bool pass = false;
};

// Decreasing trend of per-scale medians: Theil-Sen slope < 0, one-sided
// sign test over all pairwise slopes at kTrendSignificance, consecutive
// medians strictly decreasing, and at least kTrendMinScales scales.
TrendTest decreasing_trend(std::span<const double> scales, std::span<const double> medians);

}  // namespace bosloc

#endif  // BOSLOC_STATISTICS_H_
