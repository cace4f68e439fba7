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

#include <string>
#include <vector>

namespace fleetval {

enum class Direction {
  kHigherIsBetter,
  kLowerIsBetter,
};

std::string to_string(Direction direction);
Direction direction_from_string(const std::string& text);

/// Measured metric values from one benchmark run on one node. Values are
/// treated as an unordered multiset; all distribution math below depends
/// only on their empirical distribution.
///
/// Invariants: values non-empty, every element finite and >= 0.
struct MetricSample {
  std::string metric_id;
  std::string node_id;
  Direction direction = Direction::kHigherIsBetter;
  std::vector<double> values;

  MetricSample() = default;
  MetricSample(std::string metric_id, std::string node_id, Direction direction,
               std::vector<double> values);

  /// Throws InvalidInputError if the invariants do not hold.
  void validate() const;
};

/// Right-continuous empirical CDF of a sample: cdf(x) = fraction of
/// values <= x. Step heights strictly increase to exactly 1 at the last
/// support point.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(const MetricSample& sample);

  double operator()(double x) const;

  /// Ascending distinct sample values.
  const std::vector<double>& support() const { return support_; }
  /// Cumulative fractions, aligned with support(); back() == 1.0.
  const std::vector<double>& heights() const { return heights_; }

 private:
  std::vector<double> support_;
  std::vector<double> heights_;
};

EmpiricalCdf empirical_cdf(const MetricSample& sample);

/// Normalized absolute area between the two samples' CDF curves, each
/// segment weighted by 1/max of the two CDF values there and the whole
/// integral divided by the largest value across both samples. Result is
/// in [0, 1], symmetric, and 0 for identical distributions. Computed
/// exactly as a finite sum over the piecewise-constant segments between
/// merged support points.
double distance(const MetricSample& s1, const MetricSample& s2);

/// 1 - distance(s1, s2).
double similarity(const MetricSample& s1, const MetricSample& s2);

/// One-direction variant of distance() that accumulates only deviations
/// on the bad side of the criteria sample. Direction is taken from
/// `observed`: for HigherIsBetter the integrand keeps max(0, CDF_obs -
/// CDF_criteria); for LowerIsBetter the numerator roles are mirrored.
/// Always <= distance(observed, criteria_sample).
double one_sided_distance(const MetricSample& observed,
                          const MetricSample& criteria_sample);

}  // namespace fleetval
