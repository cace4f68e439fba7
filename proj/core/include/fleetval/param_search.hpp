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

/// Ordered step-throughput values from one end-to-end benchmark run.
struct StepSeries {
  std::string node_id;
  std::vector<double> values;  // length >= 2, finite, >= 0

  void validate() const;
};

struct SearchOptions {
  /// Consecutive mutually-similar cycles required before a window is
  /// considered stable.
  int min_consecutive_cycles = 3;
};

struct SearchResult {
  int warmup = 0;       // steps discarded before the measurement window
  int measure = 0;      // steps measured; warmup + measure <= series length
  int period = 1;       // cycle length behind the chosen window
  double mean_similarity = 1.0;  // cross-node mean pairwise similarity
  bool fallback = false;         // no stable window found; (0, K) returned
};

/// Estimated cycle length of a step series: the series is detrended by a
/// centered moving average and the smallest positive autocorrelation peak
/// at lag >= 2 is taken. Returns 1 when the series carries no periodic
/// structure (constant or featureless).
int estimate_period(const std::vector<double>& values);

/// Searches each series for the earliest run of consecutive cycles whose
/// pairwise similarity exceeds alpha; the steps before that run become the
/// candidate warmup and one cycle the candidate measurement window. Across
/// series the candidate maximizing mean pairwise cross-node similarity of
/// the windowed samples wins; among maximizers the smallest window is
/// kept. Falls back to (0, K) with a warning flag when no series yields a
/// stable window.
SearchResult search_parameters(const std::vector<StepSeries>& series,
                               double alpha,
                               const SearchOptions& options = {});

}  // namespace fleetval
