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

#include "fleetval/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "fleetval/error.hpp"

namespace fleetval {

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr double kMinIntervalHours = 1e-6;

double hours(std::int64_t seconds) {
  return static_cast<double>(seconds) / kSecondsPerHour;
}

}  // namespace

int NodeStatus::total_incidents() const {
  int total = 0;
  for (const auto& [category, count] : incident_counts) total += count;
  return total;
}

std::vector<TrainingSample> extract_training_samples(
    const std::vector<IncidentEvent>& trace) {
  if (trace.size() < 2) {
    throw FitError("incident trace needs at least two incidents");
  }
  std::int64_t trace_start = trace.front().start_ts;
  for (const IncidentEvent& e : trace) {
    trace_start = std::min(trace_start, e.start_ts);
  }

  std::map<std::string, std::vector<const IncidentEvent*>> by_node;
  for (const IncidentEvent& e : trace) by_node[e.node_id].push_back(&e);

  std::vector<TrainingSample> samples;
  for (auto& [node_id, events] : by_node) {
    std::stable_sort(events.begin(), events.end(),
                     [](const IncidentEvent* a, const IncidentEvent* b) {
                       return a->start_ts < b->start_ts;
                     });
    std::int64_t boundary = trace_start;
    double downtime_hours = 0.0;
    NodeStatus status;
    status.node_id = node_id;
    for (const IncidentEvent* e : events) {
      status.uptime_hours = hours(boundary - trace_start) - downtime_hours;
      status.hours_since_last_incident = 0.0;
      status.observed_ts = boundary;
      for (const auto& [category, count] : status.incident_counts) {
        status.mtbi_hours[category] =
            count > 0 ? status.uptime_hours / count : 0.0;
      }
      TrainingSample sample;
      sample.status = status;
      sample.tbni_hours =
          std::max(hours(e->start_ts - boundary), kMinIntervalHours);
      samples.push_back(sample);

      // Advance past this incident.
      status.incident_counts[e->category] += 1;
      downtime_hours += std::max(0.0, hours(e->end_ts - e->start_ts));
      boundary = std::max(boundary, e->end_ts);
    }
  }
  if (samples.empty()) {
    throw FitError("incident trace yields no completed intervals");
  }
  return samples;
}

std::vector<std::pair<std::string, double>> category_frequencies(
    const std::vector<IncidentEvent>& trace) {
  std::map<std::string, std::size_t> counts;
  for (const IncidentEvent& e : trace) counts[e.category] += 1;
  std::vector<std::pair<std::string, double>> freqs;
  freqs.reserve(counts.size());
  for (const auto& [category, count] : counts) {
    freqs.emplace_back(category,
                       static_cast<double>(count) / trace.size());
  }
  return freqs;
}

std::string to_string(HazardVariant variant) {
  switch (variant) {
    case HazardVariant::kExponential:
      return "exponential";
    case HazardVariant::kExponentialPerIncidentCount:
      return "exponential_per_incident_count";
    case HazardVariant::kExponentialPerHour:
      return "exponential_per_hour";
    case HazardVariant::kCoxLinear:
      return "cox_linear";
  }
  return "unknown";
}

HazardVariant hazard_variant_from_string(const std::string& text) {
  if (text == "exponential") return HazardVariant::kExponential;
  if (text == "exponential_per_incident_count") {
    return HazardVariant::kExponentialPerIncidentCount;
  }
  if (text == "exponential_per_hour") return HazardVariant::kExponentialPerHour;
  if (text == "cox_linear") return HazardVariant::kCoxLinear;
  throw InvalidInputError("unknown hazard variant '" + text + "'");
}

namespace {

// ---- covariate vectors for the Cox variant ----

std::vector<std::string> covariate_names_for(
    const std::vector<TrainingSample>& samples) {
  std::set<std::string> categories;
  for (const TrainingSample& s : samples) {
    for (const auto& [category, count] : s.status.incident_counts) {
      categories.insert(category);
    }
  }
  std::vector<std::string> names = {"uptime_hours",
                                    "hours_since_last_incident",
                                    "total_incidents"};
  for (const std::string& c : categories) names.push_back("count:" + c);
  for (const std::string& c : categories) names.push_back("mtbi:" + c);
  return names;
}

std::vector<double> raw_covariates(const NodeStatus& status,
                                   const std::vector<std::string>& names) {
  std::vector<double> x;
  x.reserve(names.size());
  for (const std::string& name : names) {
    if (name == "uptime_hours") {
      x.push_back(status.uptime_hours);
    } else if (name == "hours_since_last_incident") {
      x.push_back(status.hours_since_last_incident);
    } else if (name == "total_incidents") {
      x.push_back(status.total_incidents());
    } else if (name.rfind("count:", 0) == 0) {
      auto it = status.incident_counts.find(name.substr(6));
      x.push_back(it == status.incident_counts.end() ? 0.0 : it->second);
    } else if (name.rfind("mtbi:", 0) == 0) {
      auto it = status.mtbi_hours.find(name.substr(5));
      x.push_back(it == status.mtbi_hours.end() ? 0.0 : it->second);
    } else {
      x.push_back(0.0);
    }
  }
  return x;
}

std::vector<double> zscore(const std::vector<double>& raw,
                           const std::vector<double>& means,
                           const std::vector<double>& stddevs) {
  std::vector<double> z(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    z[j] = (raw[j] - means[j]) / stddevs[j];
  }
  return z;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---- fitting ----

HazardModel::ExponentialParams fit_exponential(
    const std::vector<double>& durations) {
  const double mean =
      std::accumulate(durations.begin(), durations.end(), 0.0) /
      static_cast<double>(durations.size());
  if (mean <= 0.0) throw FitError("degenerate trace: zero mean interval");
  return {1.0 / mean};
}

HazardModel::PerCountParams fit_per_count(
    const std::vector<TrainingSample>& samples) {
  std::map<int, std::vector<double>> buckets;
  for (const TrainingSample& s : samples) {
    buckets[s.status.total_incidents()].push_back(s.tbni_hours);
  }
  HazardModel::PerCountParams params;
  for (const auto& [count, durations] : buckets) {
    params.lambda_by_count[count] = fit_exponential(durations).lambda;
  }
  return params;
}

HazardModel::PerHourParams fit_per_hour(
    const std::vector<TrainingSample>& samples) {
  const int cap = static_cast<int>(HazardModel::kTbniCapHours);
  HazardModel::PerHourParams params;
  params.survival.assign(cap + 1, 0.0);
  for (const TrainingSample& s : samples) {
    const int life = std::min(cap, static_cast<int>(std::floor(s.tbni_hours)));
    // This sample has at least an h-hour life for every h <= life.
    for (int h = 0; h <= life; ++h) params.survival[h] += 1.0;
  }
  for (double& v : params.survival) {
    v /= static_cast<double>(samples.size());
  }
  return params;
}

struct PartialLikelihood {
  double log_likelihood = 0.0;
  std::vector<double> gradient;
};

// Breslow-tied Cox partial likelihood over uncensored samples sorted by
// descending duration. Running sums are shifted by the max linear
// predictor for numerical stability.
PartialLikelihood cox_partial(const std::vector<std::vector<double>>& x,
                              const std::vector<double>& y,
                              const std::vector<std::size_t>& order,
                              const std::vector<double>& beta) {
  const std::size_t n = x.size();
  const std::size_t d = beta.size();
  std::vector<double> eta(n);
  double eta_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    eta[i] = dot(x[i], beta);
    eta_max = std::max(eta_max, eta[i]);
  }

  PartialLikelihood out;
  out.gradient.assign(d, 0.0);
  double sum_exp = 0.0;                 // sum of exp(eta - eta_max) over risk set
  std::vector<double> sum_x_exp(d, 0.0);
  std::size_t idx = 0;
  while (idx < n) {
    // Add the tied group at this duration to the risk set first.
    std::size_t group_end = idx;
    const double t = y[order[idx]];
    while (group_end < n && y[order[group_end]] == t) {
      const std::size_t s = order[group_end];
      const double w = std::exp(eta[s] - eta_max);
      sum_exp += w;
      for (std::size_t j = 0; j < d; ++j) sum_x_exp[j] += x[s][j] * w;
      ++group_end;
    }
    const double group_size = static_cast<double>(group_end - idx);
    const double log_denom = std::log(sum_exp) + eta_max;
    for (std::size_t k = idx; k < group_end; ++k) {
      const std::size_t s = order[k];
      out.log_likelihood += eta[s] - log_denom;
      for (std::size_t j = 0; j < d; ++j) {
        out.gradient[j] += x[s][j];
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      out.gradient[j] -= group_size * sum_x_exp[j] / sum_exp;
    }
    idx = group_end;
  }
  return out;
}

HazardModel::CoxParams fit_cox(const std::vector<TrainingSample>& samples) {
  const std::size_t n = samples.size();
  HazardModel::CoxParams params;
  params.covariate_names = covariate_names_for(samples);
  const std::size_t d = params.covariate_names.size();

  std::vector<std::vector<double>> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = raw_covariates(samples[i].status, params.covariate_names);
  }
  params.means.assign(d, 0.0);
  params.stddevs.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += raw[i][j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      var += (raw[i][j] - mean) * (raw[i][j] - mean);
    }
    const double stddev = std::sqrt(var / static_cast<double>(n));
    params.means[j] = mean;
    params.stddevs[j] = stddev > 1e-12 ? stddev : 1.0;
  }
  std::vector<std::vector<double>> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = zscore(raw[i], params.means, params.stddevs);
    y[i] = samples[i].tbni_hours;
  }

  std::vector<std::size_t> desc(n);
  std::iota(desc.begin(), desc.end(), 0);
  std::stable_sort(desc.begin(), desc.end(),
                   [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });

  // Gradient ascent with deterministic backtracking.
  std::vector<double> beta(d, 0.0);
  PartialLikelihood current = cox_partial(x, y, desc, beta);
  double step = 1.0;
  for (int iter = 0; iter < 500; ++iter) {
    double grad_max = 0.0;
    for (double g : current.gradient) grad_max = std::max(grad_max, std::abs(g));
    if (grad_max / static_cast<double>(n) < 1e-8) break;

    bool accepted = false;
    for (int back = 0; back < 40; ++back) {
      std::vector<double> trial = beta;
      for (std::size_t j = 0; j < d; ++j) {
        trial[j] += step * current.gradient[j] / static_cast<double>(n);
      }
      PartialLikelihood next = cox_partial(x, y, desc, trial);
      if (next.log_likelihood >= current.log_likelihood) {
        beta = std::move(trial);
        current = std::move(next);
        step = std::min(step * 1.2, 64.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  params.coefficients = beta;

  // Breslow baseline cumulative hazard at ascending event times.
  std::vector<double> eta(n);
  double eta_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    eta[i] = dot(x[i], beta);
    eta_max = std::max(eta_max, eta[i]);
  }
  double sum_exp = 0.0;
  std::size_t idx = 0;
  std::vector<std::pair<double, double>> steps;  // (time, increment)
  while (idx < n) {
    std::size_t group_end = idx;
    const double t = y[desc[idx]];
    while (group_end < n && y[desc[group_end]] == t) {
      sum_exp += std::exp(eta[desc[group_end]] - eta_max);
      ++group_end;
    }
    const double log_denom = std::log(sum_exp) + eta_max;
    steps.emplace_back(
        t, std::exp(std::log(static_cast<double>(group_end - idx)) - log_denom));
    idx = group_end;
  }
  std::reverse(steps.begin(), steps.end());  // ascending time
  double cum = 0.0;
  for (const auto& [t, inc] : steps) {
    cum += inc;
    params.baseline_times.push_back(t);
    params.baseline_cumhaz.push_back(cum);
  }
  return params;
}

}  // namespace

HazardModel::HazardModel(ExponentialParams params) : params_(std::move(params)) {}
HazardModel::HazardModel(PerCountParams params) : params_(std::move(params)) {
  if (per_count_params()->lambda_by_count.empty()) {
    throw InvalidInputError("per-count model needs at least one bucket");
  }
}
HazardModel::HazardModel(PerHourParams params) : params_(std::move(params)) {
  if (per_hour_params()->survival.empty()) {
    throw InvalidInputError("per-hour model needs a survival curve");
  }
}
HazardModel::HazardModel(CoxParams params) : params_(std::move(params)) {}

HazardModel HazardModel::fit(const std::vector<TrainingSample>& samples,
                             HazardVariant variant) {
  if (samples.empty()) {
    throw FitError("cannot fit a hazard model on an empty sample set");
  }
  switch (variant) {
    case HazardVariant::kExponential: {
      std::vector<double> durations;
      durations.reserve(samples.size());
      for (const TrainingSample& s : samples) durations.push_back(s.tbni_hours);
      return HazardModel(fit_exponential(durations));
    }
    case HazardVariant::kExponentialPerIncidentCount:
      return HazardModel(fit_per_count(samples));
    case HazardVariant::kExponentialPerHour:
      return HazardModel(fit_per_hour(samples));
    case HazardVariant::kCoxLinear:
      return HazardModel(fit_cox(samples));
  }
  throw FitError("unknown hazard variant");
}

HazardVariant HazardModel::variant() const {
  if (std::holds_alternative<ExponentialParams>(params_)) {
    return HazardVariant::kExponential;
  }
  if (std::holds_alternative<PerCountParams>(params_)) {
    return HazardVariant::kExponentialPerIncidentCount;
  }
  if (std::holds_alternative<PerHourParams>(params_)) {
    return HazardVariant::kExponentialPerHour;
  }
  return HazardVariant::kCoxLinear;
}

const HazardModel::ExponentialParams* HazardModel::exponential_params() const {
  return std::get_if<ExponentialParams>(&params_);
}
const HazardModel::PerCountParams* HazardModel::per_count_params() const {
  return std::get_if<PerCountParams>(&params_);
}
const HazardModel::PerHourParams* HazardModel::per_hour_params() const {
  return std::get_if<PerHourParams>(&params_);
}
const HazardModel::CoxParams* HazardModel::cox_params() const {
  return std::get_if<CoxParams>(&params_);
}

namespace {

double per_hour_survival_at(const std::vector<double>& survival, double t) {
  if (t <= 0.0) return 1.0;
  const double last = static_cast<double>(survival.size() - 1);
  if (t >= last) return survival.back();
  const int lo = static_cast<int>(std::floor(t));
  const double frac = t - lo;
  return survival[lo] + (survival[lo + 1] - survival[lo]) * frac;
}

}  // namespace

double HazardModel::predict_cdf(const NodeStatus& status, double t_hours) const {
  if (t_hours <= 0.0) return 0.0;
  if (const auto* p = exponential_params()) {
    return 1.0 - std::exp(-p->lambda * t_hours);
  }
  if (const auto* p = per_count_params()) {
    const int count = status.total_incidents();
    auto it = p->lambda_by_count.lower_bound(count);
    if (it == p->lambda_by_count.end()) {
      --it;
    } else if (it->first != count && it != p->lambda_by_count.begin()) {
      auto below = std::prev(it);
      if (count - below->first <= it->first - count) it = below;
    }
    return 1.0 - std::exp(-it->second * t_hours);
  }
  if (const auto* p = per_hour_params()) {
    // Condition on the node's current age since its last incident.
    double age = std::max(0.0, status.hours_since_last_incident);
    double s_age = per_hour_survival_at(p->survival, age);
    if (s_age <= 0.0) {
      // No training interval lived this long; condition on the oldest
      // age that did.
      double oldest = 0.0;
      for (std::size_t h = 0; h < p->survival.size(); ++h) {
        if (p->survival[h] > 0.0) oldest = static_cast<double>(h);
      }
      age = oldest;
      s_age = per_hour_survival_at(p->survival, age);
    }
    const double s_t = per_hour_survival_at(p->survival, age + t_hours);
    return 1.0 - s_t / s_age;
  }
  const auto* p = cox_params();
  const std::vector<double> z =
      zscore(raw_covariates(status, p->covariate_names), p->means, p->stddevs);
  const double risk = std::exp(dot(z, p->coefficients));
  auto it = std::upper_bound(p->baseline_times.begin(), p->baseline_times.end(),
                             t_hours);
  if (it == p->baseline_times.begin()) return 0.0;
  const double h0 =
      p->baseline_cumhaz[static_cast<std::size_t>(it - p->baseline_times.begin()) - 1];
  return 1.0 - std::exp(-h0 * risk);
}

double HazardModel::predict_tbni(const NodeStatus& status) const {
  // Trapezoid over the survival curve on a 1-hour grid up to the cap.
  const int cap = static_cast<int>(kTbniCapHours);
  double prev = 1.0;
  double acc = 0.0;
  for (int h = 1; h <= cap; ++h) {
    const double s = 1.0 - predict_cdf(status, static_cast<double>(h));
    acc += 0.5 * (prev + s);
    prev = s;
  }
  return std::min(acc, kTbniCapHours);
}

double HazardModel::sample_tbni(const NodeStatus& status, double u) const {
  if (u <= 0.0) return 0.0;
  if (const auto* p = exponential_params()) {
    const double t = -std::log1p(-u) / p->lambda;
    return t;
  }
  const int cap = static_cast<int>(kTbniCapHours);
  if (u > predict_cdf(status, kTbniCapHours)) {
    return std::numeric_limits<double>::infinity();
  }
  double prev_cdf = 0.0;
  for (int h = 1; h <= cap; ++h) {
    const double c = predict_cdf(status, static_cast<double>(h));
    if (c >= u) {
      if (c <= prev_cdf) return static_cast<double>(h);
      const double frac = (u - prev_cdf) / (c - prev_cdf);
      return static_cast<double>(h - 1) + frac;
    }
    prev_cdf = c;
  }
  return kTbniCapHours;
}

std::vector<double> HazardModel::per_hour_rates() const {
  const auto* p = per_hour_params();
  if (p == nullptr) {
    throw InvalidInputError("per-hour rates only exist for the per-hour variant");
  }
  std::vector<double> rates;
  for (std::size_t h = 0; h + 1 < p->survival.size(); ++h) {
    if (p->survival[h] <= 0.0) break;
    rates.push_back((p->survival[h] - p->survival[h + 1]) / p->survival[h]);
  }
  return rates;
}

double model_accuracy(const HazardModel& model,
                      const std::vector<TrainingSample>& test_samples) {
  if (test_samples.empty()) {
    throw InvalidInputError("model_accuracy needs a non-empty test set");
  }
  double sum = 0.0;
  for (const TrainingSample& s : test_samples) {
    const double prediction =
        std::min(model.predict_tbni(s.status), HazardModel::kTbniCapHours);
    const double truth = std::min(s.tbni_hours, HazardModel::kTbniCapHours);
    sum += 1.0 - std::abs(prediction - truth) / HazardModel::kTbniCapHours;
  }
  return sum / static_cast<double>(test_samples.size());
}

double derive_p0(double mean_job_duration_hours, double t0_hours) {
  if (mean_job_duration_hours <= 0.0 || t0_hours <= 0.0) {
    throw InvalidInputError("derive_p0 needs positive durations");
  }
  return 1.0 - std::exp(-t0_hours / mean_job_duration_hours);
}

}  // namespace fleetval
