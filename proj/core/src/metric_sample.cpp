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

#include "fleetval/metric_sample.hpp"

#include <algorithm>
#include <cmath>

#include "fleetval/error.hpp"

namespace fleetval {

std::string to_string(Direction direction) {
  return direction == Direction::kHigherIsBetter ? "higher" : "lower";
}

Direction direction_from_string(const std::string& text) {
  if (text == "higher") return Direction::kHigherIsBetter;
  if (text == "lower") return Direction::kLowerIsBetter;
  throw InvalidInputError("unknown direction '" + text +
                          "' (expected 'higher' or 'lower')");
}

MetricSample::MetricSample(std::string metric_id_in, std::string node_id_in,
                           Direction direction_in, std::vector<double> values_in)
    : metric_id(std::move(metric_id_in)),
      node_id(std::move(node_id_in)),
      direction(direction_in),
      values(std::move(values_in)) {
  validate();
}

void MetricSample::validate() const {
  if (values.empty()) {
    throw InvalidInputError("sample for metric '" + metric_id + "' on node '" +
                            node_id + "' has no values");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInputError("sample for metric '" + metric_id +
                              "' on node '" + node_id +
                              "' contains a non-finite or negative value");
    }
  }
}

EmpiricalCdf::EmpiricalCdf(const MetricSample& sample) {
  sample.validate();
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::size_t seen = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ++seen;
    if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i]) {
      support_.push_back(sorted[i]);
      heights_.push_back(static_cast<double>(seen) / n);
    }
  }
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), x);
  if (it == support_.begin()) return 0.0;
  return heights_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

EmpiricalCdf empirical_cdf(const MetricSample& sample) {
  return EmpiricalCdf(sample);
}

namespace {

enum class Side { kBoth, kObsAbove, kObsBelow };

// Walks the merged support points of both CDFs and accumulates the
// piecewise-constant integrand over [0, x_max], then divides by x_max.
// `side` selects which sign of (F1 - F2) contributes.
double segment_integral(const MetricSample& s1, const MetricSample& s2,
                        Side side) {
  if (s1.metric_id != s2.metric_id) {
    throw InvalidInputError("metric mismatch: '" + s1.metric_id + "' vs '" +
                            s2.metric_id + "'");
  }
  const EmpiricalCdf c1(s1);
  const EmpiricalCdf c2(s2);
  const std::vector<double>& sup1 = c1.support();
  const std::vector<double>& sup2 = c2.support();
  const double x_max = std::max(sup1.back(), sup2.back());
  if (x_max <= 0.0) return 0.0;  // both samples all-zero: identical CDFs

  double acc = 0.0;
  double prev_x = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sup1.size() || j < sup2.size()) {
    double x;
    if (i < sup1.size() && j < sup2.size()) {
      x = std::min(sup1[i], sup2[j]);
    } else if (i < sup1.size()) {
      x = sup1[i];
    } else {
      x = sup2[j];
    }
    const double width = x - prev_x;
    if (width > 0.0) {
      const double denom = std::max(f1, f2);
      if (denom > 0.0) {
        double num = 0.0;
        switch (side) {
          case Side::kBoth:
            num = std::abs(f1 - f2);
            break;
          case Side::kObsAbove:
            num = std::max(0.0, f1 - f2);
            break;
          case Side::kObsBelow:
            num = std::max(0.0, f2 - f1);
            break;
        }
        acc += width * (num / denom);
      }
    }
    if (i < sup1.size() && sup1[i] == x) f1 = c1.heights()[i], ++i;
    if (j < sup2.size() && sup2[j] == x) f2 = c2.heights()[j], ++j;
    prev_x = x;
  }
  return acc / x_max;
}

}  // namespace

double distance(const MetricSample& s1, const MetricSample& s2) {
  return segment_integral(s1, s2, Side::kBoth);
}

double similarity(const MetricSample& s1, const MetricSample& s2) {
  return 1.0 - distance(s1, s2);
}

double one_sided_distance(const MetricSample& observed,
                          const MetricSample& criteria_sample) {
  const Side side = observed.direction == Direction::kHigherIsBetter
                        ? Side::kObsAbove
                        : Side::kObsBelow;
  return segment_integral(observed, criteria_sample, side);
}

}  // namespace fleetval
