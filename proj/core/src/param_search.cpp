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

#include "fleetval/param_search.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "fleetval/error.hpp"
#include "fleetval/metric_sample.hpp"

namespace fleetval {

void StepSeries::validate() const {
  if (values.size() < 2) {
    throw InvalidInputError("step series on node '" + node_id +
                            "' needs at least two steps");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInputError("step series on node '" + node_id +
                              "' contains a non-finite or negative value");
    }
  }
}

namespace {

// Residual after subtracting a centered moving average. Only the interior
// where the full window fits is returned.
std::vector<double> detrend(const std::vector<double>& values) {
  const int k = static_cast<int>(values.size());
  int window = std::max(3, k / 10);
  if (window % 2 == 0) ++window;
  if (window >= k) return {};
  const int half = window / 2;
  std::vector<double> residual;
  residual.reserve(k - window + 1);
  double sum = 0.0;
  for (int i = 0; i < window; ++i) sum += values[i];
  for (int c = half; c + half < k; ++c) {
    residual.push_back(values[c] - sum / window);
    if (c + half + 1 < k) sum += values[c + half + 1] - values[c - half];
  }
  return residual;
}

std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag) {
  const int n = static_cast<int>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  std::vector<double> acf(max_lag + 1, 0.0);
  if (var <= 0.0) return acf;
  for (int lag = 0; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (int t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
    acf[lag] = s / var;
  }
  return acf;
}

MetricSample window_sample(const StepSeries& series, int start, int len) {
  const int k = static_cast<int>(series.values.size());
  len = std::min(len, k);
  start = std::min(start, k - len);
  std::vector<double> vals(series.values.begin() + start,
                           series.values.begin() + start + len);
  return MetricSample("step_series", series.node_id,
                      Direction::kHigherIsBetter, std::move(vals));
}

struct Candidate {
  int warmup = 0;
  int measure = 0;
  int period = 1;
};

// Earliest run of `need` consecutive cycles that are pairwise similar above
// alpha. The run start becomes the warmup and one cycle the measurement
// window.
bool stable_window(const StepSeries& series, double alpha, int need,
                   Candidate* out) {
  const int k = static_cast<int>(series.values.size());
  const int p = std::min(estimate_period(series.values), k / 2);
  const int cycles = k / p;
  if (cycles < need) return false;
  std::vector<MetricSample> cycle_samples;
  cycle_samples.reserve(cycles);
  for (int c = 0; c < cycles; ++c) {
    cycle_samples.push_back(window_sample(series, c * p, p));
  }
  for (int start = 0; start + need <= cycles; ++start) {
    bool ok = true;
    for (int a = start; ok && a < start + need; ++a) {
      for (int b = a + 1; ok && b < start + need; ++b) {
        ok = similarity(cycle_samples[a], cycle_samples[b]) > alpha;
      }
    }
    if (ok) {
      out->warmup = start * p;
      out->measure = p;
      out->period = p;
      return true;
    }
  }
  return false;
}

double cross_node_similarity(const std::vector<StepSeries>& series,
                             const Candidate& c) {
  if (series.size() < 2) return 1.0;
  std::vector<MetricSample> windows;
  windows.reserve(series.size());
  for (const StepSeries& s : series) {
    windows.push_back(window_sample(s, c.warmup, c.measure));
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      sum += similarity(windows[i], windows[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace

int estimate_period(const std::vector<double>& values) {
  const int k = static_cast<int>(values.size());
  if (k < 4) return 1;
  std::vector<double> residual = detrend(values);
  if (static_cast<int>(residual.size()) < 8) {
    residual = values;  // too short to detrend; use the raw series
  }
  const int max_lag = std::min(static_cast<int>(residual.size()) / 2, k / 2);
  if (max_lag < 2) return 1;
  const std::vector<double> acf = autocorrelation(residual, max_lag);
  // Smallest local maximum with meaningful positive correlation.
  for (int lag = 2; lag < max_lag; ++lag) {
    if (acf[lag] > 0.1 && acf[lag] > acf[lag - 1] && acf[lag] >= acf[lag + 1]) {
      return lag;
    }
  }
  int best = 1;
  double best_val = 0.1;
  for (int lag = 2; lag <= max_lag; ++lag) {
    if (acf[lag] > best_val) {
      best_val = acf[lag];
      best = lag;
    }
  }
  return best;
}

SearchResult search_parameters(const std::vector<StepSeries>& series,
                               double alpha, const SearchOptions& options) {
  if (series.empty()) {
    throw InvalidInputError("search_parameters: empty series set");
  }
  if (options.min_consecutive_cycles < 2) {
    throw InvalidInputError("min_consecutive_cycles must be >= 2");
  }
  for (const StepSeries& s : series) s.validate();

  std::set<std::tuple<int, int, int>> seen;
  std::vector<Candidate> candidates;
  for (const StepSeries& s : series) {
    Candidate c;
    if (stable_window(s, alpha, options.min_consecutive_cycles, &c) &&
        seen.insert({c.warmup, c.measure, c.period}).second) {
      candidates.push_back(c);
    }
  }

  if (candidates.empty()) {
    int min_k = static_cast<int>(series.front().values.size());
    for (const StepSeries& s : series) {
      min_k = std::min(min_k, static_cast<int>(s.values.size()));
    }
    SearchResult fb;
    fb.warmup = 0;
    fb.measure = min_k;
    fb.period = 1;
    fb.mean_similarity = cross_node_similarity(series, {0, min_k, 1});
    fb.fallback = true;
    return fb;
  }

  SearchResult best;
  bool first = true;
  for (const Candidate& c : candidates) {
    const double sim = cross_node_similarity(series, c);
    const auto key = std::make_tuple(-sim, c.measure, c.warmup);
    const auto best_key =
        std::make_tuple(-best.mean_similarity, best.measure, best.warmup);
    if (first || key < best_key) {
      best.warmup = c.warmup;
      best.measure = c.measure;
      best.period = c.period;
      best.mean_similarity = sim;
      best.fallback = false;
      first = false;
    }
  }
  return best;
}

}  // namespace fleetval
