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

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace fleetval {

/// One incident from the node incident trace. Timestamps are integer
/// seconds since epoch; the incident occupies [start_ts, end_ts].
struct IncidentEvent {
  std::string node_id;
  std::int64_t start_ts = 0;
  std::int64_t end_ts = 0;
  std::string category;
  std::string component;
};

/// Covariate snapshot of one node at one observation time.
struct NodeStatus {
  std::string node_id;
  double uptime_hours = 0.0;
  double hours_since_last_incident = 0.0;
  std::map<std::string, int> incident_counts;   // per category
  std::map<std::string, double> mtbi_hours;     // per category
  std::int64_t observed_ts = 0;

  int total_incidents() const;
};

/// A (covariates, time-before-next-incident) training pair extracted at an
/// incident boundary.
struct TrainingSample {
  NodeStatus status;
  double tbni_hours = 0.0;
};

/// One sample per completed inter-incident interval: for every node the
/// trace-window start and each incident's end form observation boundaries,
/// and the time to the following incident's start is the target. Requires
/// at least two incidents overall; throws FitError otherwise.
std::vector<TrainingSample> extract_training_samples(
    const std::vector<IncidentEvent>& trace);

/// Distinct incident categories with their empirical frequencies.
std::vector<std::pair<std::string, double>> category_frequencies(
    const std::vector<IncidentEvent>& trace);

enum class HazardVariant {
  kExponential,
  kExponentialPerIncidentCount,
  kExponentialPerHour,
  kCoxLinear,
};

std::string to_string(HazardVariant variant);
HazardVariant hazard_variant_from_string(const std::string& text);

/// Fitted time-before-next-incident model. predict_cdf is non-decreasing
/// in t, within [0, 1], and 0 at t = 0 for every variant.
class HazardModel {
 public:
  static constexpr double kTbniCapHours = 2400.0;

  struct ExponentialParams {
    double lambda = 0.0;  // incidents per hour
  };
  struct PerCountParams {
    std::map<int, double> lambda_by_count;
  };
  struct PerHourParams {
    // survival[h] = fraction of training intervals lasting at least h
    // hours, h = 0 .. kTbniCapHours.
    std::vector<double> survival;
  };
  struct CoxParams {
    std::vector<std::string> covariate_names;
    std::vector<double> coefficients;
    std::vector<double> means;    // z-score centering per covariate
    std::vector<double> stddevs;  // z-score scaling per covariate
    std::vector<double> baseline_times;   // ascending event times (hours)
    std::vector<double> baseline_cumhaz;  // Breslow cumulative hazard
  };

  static HazardModel fit(const std::vector<TrainingSample>& samples,
                         HazardVariant variant);

  explicit HazardModel(ExponentialParams params);
  explicit HazardModel(PerCountParams params);
  explicit HazardModel(PerHourParams params);
  explicit HazardModel(CoxParams params);

  HazardVariant variant() const;

  /// P(next incident within t hours | status).
  double predict_cdf(const NodeStatus& status, double t_hours) const;

  /// Expected time to next incident, truncated at kTbniCapHours
  /// (trapezoid integration of the survival curve on a 1-hour grid).
  double predict_tbni(const NodeStatus& status) const;

  /// Quantile of the fitted distribution: smallest t with cdf >= u.
  /// Returns +infinity when u exceeds the cdf at the cap.
  double sample_tbni(const NodeStatus& status, double u) const;

  /// Discrete per-hour incident rates of the per-hour variant, for
  /// inspection: rate[h] = P(incident in hour h | alive at h).
  std::vector<double> per_hour_rates() const;

  const ExponentialParams* exponential_params() const;
  const PerCountParams* per_count_params() const;
  const PerHourParams* per_hour_params() const;
  const CoxParams* cox_params() const;

 private:
  std::variant<ExponentialParams, PerCountParams, PerHourParams, CoxParams>
      params_;
};

/// Mean over test samples of 1 - |capped prediction - capped truth| / cap.
double model_accuracy(const HazardModel& model,
                      const std::vector<TrainingSample>& test_samples);

/// Probability threshold equivalent to "expected time to incident shorter
/// than the expected job duration" for an exponential single-node hazard
/// observed over a t0-hour horizon.
double derive_p0(double mean_job_duration_hours, double t0_hours);

}  // namespace fleetval
