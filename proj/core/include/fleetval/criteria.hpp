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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fleetval/metric_sample.hpp"

namespace fleetval {

inline constexpr double kDefaultAlpha = 0.95;

/// Learned acceptance criteria for one benchmark metric: a reference
/// sample plus the similarity threshold every healthy result must exceed.
struct Criteria {
  std::string metric_id;
  Direction direction = Direction::kHigherIsBetter;
  double alpha = kDefaultAlpha;
  MetricSample reference;
};

/// Index of the member of `samples` maximizing the sum of pairwise
/// similarities to all members. Ties are broken by lowest node_id, then
/// by lexicographically smallest sorted value vector, so the result does
/// not depend on input order. All samples must share one metric_id.
std::size_t get_centroid(const std::vector<MetricSample>& samples);

struct LearnResult {
  Criteria criteria;
  std::vector<std::size_t> defect_indices;    // positions in the input set
  std::vector<std::string> defect_node_ids;   // sorted, deduplicated
  int iterations = 0;
};

/// Iteratively excludes samples whose similarity to the current centroid
/// is <= alpha and recomputes the centroid over the remainder, until every
/// retained sample exceeds alpha or a single sample remains. The defect
/// set grows monotonically, so the loop runs at most |samples| times.
LearnResult learn_criteria(const std::vector<MetricSample>& samples,
                           double alpha = kDefaultAlpha);

struct ValidationVerdict {
  std::string node_id;
  bool defect = false;
  std::vector<std::string> violating_metrics;   // sorted
  std::map<std::string, double> scores;         // metric -> one-sided similarity
};

/// Scores each result against its metric's criteria with
/// 1 - one_sided_distance and marks a node defective iff any score is
/// <= that metric's alpha. Throws ConfigError when a result's metric has
/// no criteria entry. Verdicts are returned sorted by node_id.
std::vector<ValidationVerdict> filter_defects(
    const std::vector<MetricSample>& results,
    const std::vector<Criteria>& criteria);

/// Arithmetic mean of pairwise similarities over all unordered pairs.
/// Requires at least two samples.
double repeatability(const std::vector<MetricSample>& samples);

/// min over defects of distance(sample, reference) divided by max over
/// healthy of the same. Returns +infinity when every healthy sample is
/// identical in distribution to the reference.
double margin_ratio(const std::vector<MetricSample>& defect_samples,
                    const std::vector<MetricSample>& healthy_samples,
                    const Criteria& criteria);

}  // namespace fleetval
