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

#include "fleetval/selection.hpp"

#include <algorithm>
#include <set>

#include "fleetval/error.hpp"

namespace fleetval {

namespace {

void validate_benchmarks(const std::vector<BenchmarkInfo>& benchmarks) {
  std::set<std::string> ids;
  for (const BenchmarkInfo& b : benchmarks) {
    if (b.time_seconds <= 0.0) {
      throw InvalidInputError("benchmark '" + b.benchmark_id +
                              "' must have a positive running time");
    }
    if (!ids.insert(b.benchmark_id).second) {
      throw InvalidInputError("duplicate benchmark id '" + b.benchmark_id + "'");
    }
  }
}

std::set<std::string> defect_universe(
    const std::vector<BenchmarkInfo>& benchmarks) {
  std::set<std::string> universe;
  for (const BenchmarkInfo& b : benchmarks) {
    universe.insert(b.defect_node_ids.begin(), b.defect_node_ids.end());
  }
  return universe;
}

double coverage_of(const std::vector<BenchmarkInfo>& benchmarks,
                   const std::vector<bool>& chosen,
                   std::size_t universe_size) {
  std::size_t chosen_count = 0;
  std::set<std::string> covered;
  for (std::size_t i = 0; i < benchmarks.size(); ++i) {
    if (!chosen[i]) continue;
    ++chosen_count;
    covered.insert(benchmarks[i].defect_node_ids.begin(),
                   benchmarks[i].defect_node_ids.end());
  }
  if (universe_size == 0) {
    return chosen_count == benchmarks.size() ? 1.0 : 0.0;
  }
  return static_cast<double>(covered.size()) /
         static_cast<double>(universe_size);
}

double joint_probability(const std::vector<NodeStatus>& nodes,
                         const HazardModel& model, double t0_hours) {
  double survive_all = 1.0;
  for (const NodeStatus& n : nodes) {
    survive_all *= 1.0 - model.predict_cdf(n, t0_hours);
  }
  return 1.0 - survive_all;
}

std::vector<bool> chosen_mask(const std::vector<BenchmarkInfo>& benchmarks,
                              const std::vector<std::string>& subset_ids) {
  std::vector<bool> chosen(benchmarks.size(), false);
  for (const std::string& id : subset_ids) {
    bool found = false;
    for (std::size_t i = 0; i < benchmarks.size(); ++i) {
      if (benchmarks[i].benchmark_id == id) {
        chosen[i] = true;
        found = true;
        break;
      }
    }
    if (!found) {
      throw InvalidInputError("subset names unknown benchmark '" + id + "'");
    }
  }
  return chosen;
}

}  // namespace

double coverage(const std::vector<BenchmarkInfo>& benchmarks,
                const std::vector<std::string>& subset_ids) {
  validate_benchmarks(benchmarks);
  return coverage_of(benchmarks, chosen_mask(benchmarks, subset_ids),
                     defect_universe(benchmarks).size());
}

double incident_prob(const std::vector<NodeStatus>& nodes,
                     const std::vector<BenchmarkInfo>& benchmarks,
                     const std::vector<std::string>& subset_ids,
                     const HazardModel& model, double t0_hours) {
  validate_benchmarks(benchmarks);
  const double p = joint_probability(nodes, model, t0_hours);
  const double c = coverage_of(benchmarks, chosen_mask(benchmarks, subset_ids),
                               defect_universe(benchmarks).size());
  return p * (1.0 - c);
}

SelectionOutcome select_benchmarks(const std::vector<NodeStatus>& nodes,
                                   const std::vector<BenchmarkInfo>& benchmarks,
                                   const HazardModel& model, double p0,
                                   double t0_hours) {
  if (p0 <= 0.0 || p0 >= 1.0) {
    throw InvalidInputError("p0 must lie in (0, 1)");
  }
  validate_benchmarks(benchmarks);

  // Work on an id-sorted view so the outcome does not depend on input order.
  std::vector<std::size_t> by_id(benchmarks.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return benchmarks[a].benchmark_id < benchmarks[b].benchmark_id;
  });

  const std::size_t universe_size = defect_universe(benchmarks).size();
  const double p_raw = joint_probability(nodes, model, t0_hours);

  SelectionOutcome outcome;
  outcome.initial_probability = p_raw;

  std::vector<bool> chosen(benchmarks.size(), false);
  std::size_t chosen_count = 0;
  double p = p_raw * (1.0 - coverage_of(benchmarks, chosen, universe_size));
  if (p <= p0) {
    outcome.skipped = true;
    outcome.residual_probability = p;
    return outcome;
  }

  while (p > p0 && chosen_count < benchmarks.size()) {
    std::size_t best = benchmarks.size();
    double best_rate = 0.0;
    for (std::size_t i : by_id) {
      if (chosen[i]) continue;
      if (best == benchmarks.size()) best = i;  // progress guarantee
      chosen[i] = true;
      const double p_next =
          p_raw * (1.0 - coverage_of(benchmarks, chosen, universe_size));
      chosen[i] = false;
      const double rate = (p - p_next) / benchmarks[i].time_seconds;
      if (rate > best_rate) {
        best_rate = rate;
        best = i;
      }
    }
    chosen[best] = true;
    ++chosen_count;
    outcome.selected_ids.push_back(benchmarks[best].benchmark_id);
    outcome.total_time_seconds += benchmarks[best].time_seconds;
    p = p_raw * (1.0 - coverage_of(benchmarks, chosen, universe_size));
  }

  outcome.coverage = coverage_of(benchmarks, chosen, universe_size);
  outcome.residual_probability = p;
  return outcome;
}

}  // namespace fleetval
