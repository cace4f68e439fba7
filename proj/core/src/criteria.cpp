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

#include "fleetval/criteria.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "fleetval/error.hpp"

namespace fleetval {

namespace {

void require_shared_metric(const std::vector<MetricSample>& samples,
                           const char* op) {
  if (samples.empty()) {
    throw InvalidInputError(std::string(op) + ": empty sample set");
  }
  for (const MetricSample& s : samples) {
    if (s.metric_id != samples.front().metric_id) {
      throw InvalidInputError(std::string(op) + ": mixed metric ids '" +
                              samples.front().metric_id + "' and '" +
                              s.metric_id + "'");
    }
  }
}

// Content-based order: (node_id, sorted values). Summation and tie-breaks
// follow this order so results are invariant to input permutation.
std::vector<std::size_t> canonical_order(
    const std::vector<MetricSample>& samples) {
  std::vector<std::vector<double>> sorted_values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sorted_values[i] = samples[i].values;
    std::sort(sorted_values[i].begin(), sorted_values[i].end());
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (samples[a].node_id != samples[b].node_id) {
                       return samples[a].node_id < samples[b].node_id;
                     }
                     return sorted_values[a] < sorted_values[b];
                   });
  return order;
}

std::vector<std::vector<double>> similarity_matrix(
    const std::vector<MetricSample>& samples) {
  const std::size_t n = samples.size();
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sim[i][j] = sim[j][i] = similarity(samples[i], samples[j]);
    }
  }
  return sim;
}

// Centroid over the subset flagged in `retained`, using precomputed
// similarities. `order` supplies the permutation-stable iteration order.
std::size_t centroid_of(const std::vector<MetricSample>& samples,
                        const std::vector<std::vector<double>>& sim,
                        const std::vector<std::size_t>& order,
                        const std::vector<bool>& retained) {
  std::size_t best = samples.size();
  double best_sum = -1.0;
  for (std::size_t i : order) {
    if (!retained[i]) continue;
    double sum = 0.0;
    for (std::size_t j : order) {
      if (retained[j]) sum += sim[i][j];
    }
    if (sum > best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::size_t get_centroid(const std::vector<MetricSample>& samples) {
  require_shared_metric(samples, "get_centroid");
  const auto sim = similarity_matrix(samples);
  const auto order = canonical_order(samples);
  return centroid_of(samples, sim, order,
                     std::vector<bool>(samples.size(), true));
}

LearnResult learn_criteria(const std::vector<MetricSample>& samples,
                           double alpha) {
  require_shared_metric(samples, "learn_criteria");
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw InvalidInputError("alpha must lie in (0, 1)");
  }
  const std::size_t n = samples.size();
  const auto sim = similarity_matrix(samples);
  const auto order = canonical_order(samples);

  std::vector<bool> retained(n, true);
  std::size_t retained_count = n;
  LearnResult result;
  std::size_t centroid = 0;
  for (;;) {
    ++result.iterations;
    centroid = centroid_of(samples, sim, order, retained);
    std::vector<std::size_t> violators;
    for (std::size_t i : order) {
      if (retained[i] && sim[centroid][i] <= alpha) violators.push_back(i);
    }
    if (violators.empty() || retained_count <= 1) break;
    for (std::size_t i : violators) {
      retained[i] = false;
      --retained_count;
      result.defect_indices.push_back(i);
    }
    // The centroid itself always survives (self-similarity 1 > alpha), so
    // at least one sample remains retained.
  }

  result.criteria.metric_id = samples[centroid].metric_id;
  result.criteria.direction = samples[centroid].direction;
  result.criteria.alpha = alpha;
  result.criteria.reference = samples[centroid];
  std::sort(result.defect_indices.begin(), result.defect_indices.end());
  std::set<std::string> nodes;
  for (std::size_t i : result.defect_indices) nodes.insert(samples[i].node_id);
  result.defect_node_ids.assign(nodes.begin(), nodes.end());
  return result;
}

std::vector<ValidationVerdict> filter_defects(
    const std::vector<MetricSample>& results,
    const std::vector<Criteria>& criteria) {
  std::map<std::string, const Criteria*> by_metric;
  for (const Criteria& c : criteria) {
    if (!by_metric.emplace(c.metric_id, &c).second) {
      throw ConfigError("duplicate criteria for metric '" + c.metric_id + "'");
    }
  }

  std::map<std::string, ValidationVerdict> verdicts;
  for (const MetricSample& sample : results) {
    auto it = by_metric.find(sample.metric_id);
    if (it == by_metric.end()) {
      throw ConfigError("no criteria for metric '" + sample.metric_id + "'");
    }
    const Criteria& c = *it->second;
    if (c.direction != sample.direction) {
      throw ConfigError("direction mismatch for metric '" + sample.metric_id +
                        "' between result and criteria");
    }
    const double score = 1.0 - one_sided_distance(sample, c.reference);
    ValidationVerdict& v = verdicts[sample.node_id];
    v.node_id = sample.node_id;
    auto [pos, inserted] = v.scores.emplace(sample.metric_id, score);
    if (!inserted) pos->second = std::min(pos->second, score);  // worst run
  }

  std::vector<ValidationVerdict> out;
  out.reserve(verdicts.size());
  for (auto& [node_id, v] : verdicts) {
    for (const auto& [metric_id, score] : v.scores) {
      if (score <= by_metric.at(metric_id)->alpha) {
        v.violating_metrics.push_back(metric_id);
      }
    }
    v.defect = !v.violating_metrics.empty();
    out.push_back(std::move(v));
  }
  return out;
}

double repeatability(const std::vector<MetricSample>& samples) {
  require_shared_metric(samples, "repeatability");
  if (samples.size() < 2) {
    throw InvalidInputError("repeatability needs at least two samples");
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      sum += similarity(samples[i], samples[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

double margin_ratio(const std::vector<MetricSample>& defect_samples,
                    const std::vector<MetricSample>& healthy_samples,
                    const Criteria& criteria) {
  if (defect_samples.empty() || healthy_samples.empty()) {
    throw InvalidInputError("margin_ratio needs non-empty defect and healthy sets");
  }
  double min_defect = std::numeric_limits<double>::infinity();
  for (const MetricSample& s : defect_samples) {
    min_defect = std::min(min_defect, distance(s, criteria.reference));
  }
  double max_healthy = 0.0;
  for (const MetricSample& s : healthy_samples) {
    max_healthy = std::max(max_healthy, distance(s, criteria.reference));
  }
  if (max_healthy == 0.0) return std::numeric_limits<double>::infinity();
  return min_defect / max_healthy;
}

}  // namespace fleetval
