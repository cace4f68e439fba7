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

#include "fleetval/hazard.hpp"

namespace fleetval {

/// One benchmark with its running time and the defect nodes it has
/// identified historically (the coverage source).
struct BenchmarkInfo {
  std::string benchmark_id;
  double time_seconds = 0.0;
  std::vector<std::string> defect_node_ids;
};

/// Fraction of the historical defect universe (union over all benchmarks)
/// covered by the subset named in `subset_ids`. When the universe is
/// empty, proper subsets cover 0 and the full set covers 1.
double coverage(const std::vector<BenchmarkInfo>& benchmarks,
                const std::vector<std::string>& subset_ids);

/// Joint incident probability over `nodes` within t0 hours, discounted by
/// the subset's coverage: (1 - prod(1 - cdf_i)) * (1 - C).
double incident_prob(const std::vector<NodeStatus>& nodes,
                     const std::vector<BenchmarkInfo>& benchmarks,
                     const std::vector<std::string>& subset_ids,
                     const HazardModel& model, double t0_hours);

struct SelectionOutcome {
  std::vector<std::string> selected_ids;  // in pick order
  double coverage = 0.0;
  double initial_probability = 0.0;  // before any benchmark is selected
  double residual_probability = 0.0;
  double total_time_seconds = 0.0;
  bool skipped = false;  // initial probability already within p0
};

/// Greedy selection: repeatedly adds the benchmark with the largest
/// probability decrement per second of running time until the residual
/// probability drops to p0 or the full set is selected. Ties and
/// zero-gain rounds fall back to the lowest benchmark id, so every
/// iteration strictly grows the subset and the result is independent of
/// input ordering.
SelectionOutcome select_benchmarks(const std::vector<NodeStatus>& nodes,
                                   const std::vector<BenchmarkInfo>& benchmarks,
                                   const HazardModel& model, double p0,
                                   double t0_hours);

}  // namespace fleetval
