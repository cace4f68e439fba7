// Copyright 2026 The Fleetval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fleetval/metric_sample.hpp"

namespace testutil {

// Explicit formulas instead of std:: distributions so expected values stay
// stable across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

inline double exponential(std::mt19937_64& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

inline double normal(std::mt19937_64& rng, double mean = 0.0,
                     double stddev = 1.0) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline fleetval::MetricSample random_sample(std::mt19937_64& rng,
                                            const std::string& metric,
                                            const std::string& node,
                                            int min_len = 1, int max_len = 40,
                                            double lo = 0.0, double hi = 100.0) {
  const int len = uniform_int(rng, min_len, max_len);
  std::vector<double> values(len);
  for (double& v : values) v = uniform(rng, lo, hi);
  return fleetval::MetricSample(metric, node,
                                fleetval::Direction::kHigherIsBetter,
                                std::move(values));
}

// Independent evaluation of the CDF-area distance: a Riemann sum over a
// uniform grid refined with every support point, so each cell has a
// constant integrand and the sum is exact up to accumulation error.
inline double grid_distance_oracle(const fleetval::MetricSample& s1,
                                   const fleetval::MetricSample& s2,
                                   std::size_t grid_points) {
  std::vector<double> a = s1.values;
  std::vector<double> b = s2.values;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double x_max = std::max(a.back(), b.back());
  if (x_max <= 0.0) return 0.0;

  std::vector<double> cuts;
  cuts.reserve(grid_points + a.size() + b.size() + 2);
  for (std::size_t i = 0; i <= grid_points; ++i) {
    cuts.push_back(x_max * static_cast<double>(i) /
                   static_cast<double>(grid_points));
  }
  cuts.insert(cuts.end(), a.begin(), a.end());
  cuts.insert(cuts.end(), b.begin(), b.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  while (!cuts.empty() && cuts.back() > x_max) cuts.pop_back();

  double acc = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    while (ia < a.size() && a[ia] <= mid) ++ia;
    while (ib < b.size() && b[ib] <= mid) ++ib;
    const double fa = static_cast<double>(ia) / static_cast<double>(a.size());
    const double fb = static_cast<double>(ib) / static_cast<double>(b.size());
    const double denom = std::max(fa, fb);
    if (denom > 0.0) {
      acc += (cuts[i + 1] - cuts[i]) * std::abs(fa - fb) / denom;
    }
  }
  return acc / x_max;
}

}  // namespace testutil
