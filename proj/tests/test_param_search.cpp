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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fleetval/criteria.hpp"
#include "fleetval/error.hpp"
#include "fleetval/param_search.hpp"
#include "test_util.hpp"

using fleetval::Direction;
using fleetval::InvalidInputError;
using fleetval::MetricSample;
using fleetval::repeatability;
using fleetval::SearchResult;
using fleetval::search_parameters;
using fleetval::similarity;
using fleetval::StepSeries;

namespace {

// Linear ramp over `warmup` steps, then period-10 cycles with mild noise.
StepSeries warmup_series(std::mt19937_64& rng, const std::string& node,
                         int warmup, int total) {
  StepSeries series;
  series.node_id = node;
  const double base = 100.0;
  const double pattern[10] = {0, 1, 2, 3, 4, 5, 4, 3, 2, 1};
  for (int t = 0; t < total; ++t) {
    double v;
    if (t < warmup) {
      v = base * static_cast<double>(t) / warmup;
    } else {
      v = base + 4.0 * pattern[(t - warmup) % 10] +
          0.2 * testutil::normal(rng);
    }
    series.values.push_back(std::max(0.0, v));
  }
  return series;
}

StepSeries stationary_series(std::mt19937_64& rng, const std::string& node,
                             int total) {
  return warmup_series(rng, node, 0, total);
}

MetricSample window(const StepSeries& s, int start, int len) {
  return MetricSample(
      "steps", s.node_id, Direction::kHigherIsBetter,
      std::vector<double>(s.values.begin() + start,
                          s.values.begin() + start + len));
}

}  // namespace

TEST_CASE("period estimation finds the cycle length") {
  std::mt19937_64 rng(21);
  const StepSeries s = stationary_series(rng, "n1", 300);
  const int p = fleetval::estimate_period(s.values);
  CHECK(p == 10);
}

TEST_CASE("period of a constant series is one") {
  CHECK(fleetval::estimate_period(std::vector<double>(50, 3.0)) == 1);
}

TEST_CASE("constant series needs no warmup and one period") {
  const StepSeries s{"n1", std::vector<double>(40, 5.0)};
  const SearchResult r = search_parameters({s}, 0.95);
  CHECK(r.warmup == 0);
  CHECK(r.measure == r.period);
  CHECK_FALSE(r.fallback);
  CHECK(r.warmup + r.measure <= 40);
}

TEST_CASE("warmup region is excluded from the selected window") {
  std::mt19937_64 rng(22);
  std::vector<StepSeries> series;
  for (int n = 0; n < 4; ++n) {
    series.push_back(warmup_series(rng, "n" + std::to_string(n), 100, 300));
  }
  const SearchResult r = search_parameters(series, 0.95);
  REQUIRE_FALSE(r.fallback);
  CHECK(r.warmup >= 100);
  CHECK(r.warmup + r.measure <= 300);

  // The chosen window is self-consistent above the threshold while the
  // ramp region is far from the stationary distribution.
  const MetricSample chosen = window(series[0], r.warmup, r.measure);
  const MetricSample next =
      window(series[0], r.warmup + r.measure,
             std::min(r.measure, 300 - r.warmup - 2 * r.measure));
  if (!next.values.empty()) {
    CHECK(similarity(chosen, next) > 0.95);
  }
  const MetricSample ramp = window(series[0], 0, 100);
  const MetricSample stationary = window(series[0], 100, 200);
  CHECK(similarity(ramp, stationary) < 0.95);
}

TEST_CASE("tuned window tracks full-series repeatability on stationary data") {
  std::mt19937_64 rng(23);
  std::vector<StepSeries> series;
  for (int n = 0; n < 6; ++n) {
    series.push_back(stationary_series(rng, "n" + std::to_string(n), 300));
  }
  const SearchResult r = search_parameters(series, 0.95);
  REQUIRE_FALSE(r.fallback);

  std::vector<MetricSample> tuned;
  std::vector<MetricSample> full;
  for (const StepSeries& s : series) {
    tuned.push_back(window(s, r.warmup, r.measure));
    full.push_back(window(s, 0, 300));
  }
  const double tuned_rep = repeatability(tuned);
  const double full_rep = repeatability(full);
  CHECK(std::abs(tuned_rep - full_rep) < 0.01);
  CHECK(r.measure <= 150);  // at least half the steps saved
}

TEST_CASE("window always fits the series") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const int total = testutil::uniform_int(rng, 8, 200);
    std::vector<StepSeries> series;
    for (int n = 0; n < 3; ++n) {
      StepSeries s;
      s.node_id = "n" + std::to_string(n);
      for (int t = 0; t < total; ++t) {
        s.values.push_back(testutil::uniform(rng, 1.0, 2.0));
      }
      series.push_back(std::move(s));
    }
    const SearchResult r = search_parameters(series, 0.95);
    CHECK(r.warmup >= 0);
    CHECK(r.measure >= 1);
    CHECK(r.warmup + r.measure <= total);
  }
}

TEST_CASE("a never-stabilizing series forces the full-series fallback") {
  // Doubling throughput has no periodic structure and no two consecutive
  // windows are similar, so no stable measurement window exists.
  StepSeries s;
  s.node_id = "n1";
  double v = 1.0;
  for (int t = 0; t < 40; ++t) {
    s.values.push_back(v);
    v *= 2.0;
  }
  const SearchResult r = search_parameters({s}, 0.95);
  CHECK(r.fallback);
  CHECK(r.warmup == 0);
  CHECK(r.measure == static_cast<int>(s.values.size()));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(search_parameters({}, 0.95), InvalidInputError);
  StepSeries bad;
  bad.node_id = "n1";
  bad.values = {1.0};
  CHECK_THROWS_AS(search_parameters({bad}, 0.95), InvalidInputError);
}
