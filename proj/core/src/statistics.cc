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

#include "bosloc/statistics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <fmt/format.h>

#include "bosloc/error.h"

namespace bosloc {

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("power-law fit: size mismatch");
  if (xs.size() < 3) throw InvalidArgument("power-law fit needs at least 3 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw InvalidArgument(
          fmt::format("power-law fit needs positive data (point {}: {}, {})", i, xs[i], ys[i]));
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = mean(lx), my = mean(ly);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("power-law fit needs distinct x values");
  PowerLawFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

double median(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(std::span<const double> v) {
  if (v.empty()) throw InvalidArgument("mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<double> pairwise_slopes(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("pairwise slopes: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (xs[j] == xs[i]) throw InvalidArgument("pairwise slopes need distinct x values");
      out.push_back((ys[j] - ys[i]) / (xs[j] - xs[i]));
    }
  }
  return out;
}

double theil_sen_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::vector<double> slopes = pairwise_slopes(xs, ys);
  if (slopes.empty()) throw InvalidArgument("Theil-Sen slope needs at least two points");
  return median(slopes);
}

double sign_test_p_value(int successes, int trials) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw InvalidArgument("sign test: invalid counts");
  if (successes == 0) return 1.0;
  const boost::math::binomial_distribution<double> dist(trials, 0.5);
  return boost::math::cdf(boost::math::complement(dist, successes - 1));
}

TrendTest decreasing_trend(std::span<const double> scales, std::span<const double> medians) {
  if (scales.size() != medians.size()) throw InvalidArgument("trend test: size mismatch");
  TrendTest t;
  t.enough_scales = scales.size() >= static_cast<std::size_t>(kTrendMinScales);
  if (scales.size() < 2) return t;
  std::vector<double> lx, ly;
  bool positive = true;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    positive = positive && scales[i] > 0.0 && medians[i] > 0.0;
  }
  if (positive) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
      lx.push_back(std::log(scales[i]));
      ly.push_back(std::log(medians[i]));
    }
  } else {
    lx.assign(scales.begin(), scales.end());
    ly.assign(medians.begin(), medians.end());
  }
  const std::vector<double> slopes = pairwise_slopes(lx, ly);
  t.theil_sen_slope = median(slopes);
  t.pairs = static_cast<int>(slopes.size());
  t.negative_pairs =
      static_cast<int>(std::count_if(slopes.begin(), slopes.end(), [](double s) { return s < 0.0; }));
  t.p_value = sign_test_p_value(t.negative_pairs, t.pairs);
  t.strictly_decreasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i) {
    t.strictly_decreasing = t.strictly_decreasing && medians[i] < medians[i - 1];
  }
  t.pass = t.enough_scales && t.theil_sen_slope < 0.0 && t.p_value < kTrendSignificance &&
           t.strictly_decreasing;
  return t;
}

}  // namespace bosloc
