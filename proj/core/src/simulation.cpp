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

#include "fleetval/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <tuple>

#include "fleetval/error.hpp"

namespace fleetval {

std::string to_string(SimPolicy policy) {
  switch (policy) {
    case SimPolicy::kAbsence:
      return "absence";
    case SimPolicy::kFullSet:
      return "full_set";
    case SimPolicy::kSelector:
      return "selector";
    case SimPolicy::kIdeal:
      return "ideal";
  }
  return "unknown";
}

SimPolicy sim_policy_from_string(const std::string& text) {
  if (text == "absence") return SimPolicy::kAbsence;
  if (text == "full_set") return SimPolicy::kFullSet;
  if (text == "selector") return SimPolicy::kSelector;
  if (text == "ideal") return SimPolicy::kIdeal;
  throw InvalidInputError("unknown policy '" + text + "'");
}

namespace {

constexpr std::int64_t kSecondsPerHour = 3600;

std::int64_t to_seconds(double hours) {
  return std::llround(hours * static_cast<double>(kSecondsPerHour));
}

double to_hours(std::int64_t seconds) {
  return static_cast<double>(seconds) / static_cast<double>(kSecondsPerHour);
}

// Deterministic uniform in [0, 1); avoids the implementation-defined
// behavior of the standard distributions.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<AllocationRequest> stressed_replay(
    const std::vector<AllocationRequest>& trace, int cluster_size) {
  if (cluster_size < 1) {
    throw InvalidInputError("stressed_replay needs a positive cluster size");
  }
  std::vector<AllocationRequest> out = trace;
  std::stable_sort(out.begin(), out.end(),
                   [](const AllocationRequest& a, const AllocationRequest& b) {
                     return a.submit_ts < b.submit_ts;
                   });
  std::int64_t drain = 0;
  std::int64_t prev = 0;
  bool first = true;
  for (AllocationRequest& req : out) {
    std::int64_t t = req.submit_ts;
    if (!first) {
      t = std::max(std::min(t, drain), prev);
    }
    const std::int64_t work =
        static_cast<std::int64_t>(std::min(req.node_count, cluster_size)) *
        to_seconds(req.duration_hours);
    drain = std::max(drain, t) + (work + cluster_size - 1) / cluster_size;
    req.submit_ts = t;
    prev = t;
    first = false;
  }
  return out;
}

namespace {

enum class NodeState { kIdle, kValidating, kRunning, kRepairing };

struct NodeRt {
  std::string id;
  NodeState state = NodeState::kIdle;
  std::int64_t state_since = 0;
  std::int64_t up = 0;
  std::int64_t validation = 0;
  std::int64_t down = 0;
  std::int64_t idle = 0;
  int incidents = 0;
  int caught = 0;
  std::map<std::string, int> counts;  // all defect events, per category
  std::int64_t last_event_end = 0;    // repair completion of the last event
  std::vector<std::pair<std::int64_t, std::string>> schedule;
  std::size_t sched_next = 0;
};

struct Job {
  int id = 0;
  int size = 0;
  std::int64_t remaining = 0;
};

struct PlannedIncident {
  int node = -1;
  std::int64_t at = 0;  // absolute seconds
  std::string category;
};

struct Allocation {
  int job = -1;
  std::vector<int> nodes;
  std::vector<int> caught_nodes;
  std::vector<std::string> caught_categories;
  std::optional<PlannedIncident> missed;  // earliest incident not caught
  std::int64_t run_start = 0;
};

struct Event {
  std::int64_t t = 0;
  std::uint64_t seq = 0;
  enum Kind { kArrival, kValidationEnd, kRunEnd, kRepairDone } kind = kArrival;
  int index = 0;  // job, allocation, or node depending on kind

  bool operator>(const Event& other) const {
    return std::tie(t, seq) > std::tie(other.t, other.seq);
  }
};

class Engine {
 public:
  Engine(const SimConfig& config, const SimInputs& inputs)
      : config_(config), inputs_(inputs), rng_(config.seed) {
    validate();
    horizon_ = to_seconds(config_.horizon_hours);
    scheduled_mode_ = !inputs_.scheduled_incidents.empty();
    full_set_ids_.reserve(inputs_.benchmarks.size());
    for (const BenchmarkInfo& b : inputs_.benchmarks) {
      full_set_ids_.push_back(b.benchmark_id);
      full_set_seconds_ += b.time_seconds;
    }
    setup_nodes();
    setup_arrivals();
  }

  SimReport run() {
    while (!events_.empty()) {
      const Event e = events_.top();
      if (e.t >= horizon_) break;
      events_.pop();
      switch (e.kind) {
        case Event::kArrival:
          on_arrival(e.t, e.index);
          break;
        case Event::kValidationEnd:
          on_validation_end(e.t, e.index);
          break;
        case Event::kRunEnd:
          on_run_end(e.t, e.index);
          break;
        case Event::kRepairDone:
          on_repair_done(e.t, e.index);
          break;
      }
      try_schedule(e.t);
    }

    std::vector<SimNodeStats> stats;
    stats.reserve(nodes_.size());
    for (NodeRt& n : nodes_) {
      accrue(n, horizon_);
      SimNodeStats s;
      s.node_id = n.id;
      s.up_hours = to_hours(n.up);
      s.validation_hours = to_hours(n.validation);
      s.down_hours = to_hours(n.down);
      s.idle_hours = to_hours(n.idle);
      s.incidents = n.incidents;
      s.defects_caught = n.caught;
      stats.push_back(std::move(s));
    }
    SimReport report = compute_metrics(stats, config_.horizon_hours);
    report.policy = config_.policy;
    report.seed = config_.seed;
    report.completed_jobs = completed_;
    report.skipped_requests = skipped_;
    report.audit = std::move(audit_);
    return report;
  }

 private:
  void validate() const {
    if (config_.horizon_hours <= 0.0) {
      throw InvalidInputError("horizon must be positive");
    }
    if (config_.repair_no_validation_hours <= 0.0 ||
        config_.repair_with_validation_hours <= 0.0) {
      throw InvalidInputError("repair durations must be positive");
    }
    if (config_.cluster_size < 1) {
      throw InvalidInputError("cluster size must be >= 1");
    }
    if (inputs_.allocations.empty()) {
      throw InvalidInputError("allocation trace is empty");
    }
    const bool needs_validation = config_.policy == SimPolicy::kFullSet ||
                                  config_.policy == SimPolicy::kSelector;
    if (needs_validation && inputs_.benchmarks.empty()) {
      throw ConfigError("validation policies need a coverage table");
    }
    const bool samples_incidents = config_.policy != SimPolicy::kIdeal &&
                                   inputs_.scheduled_incidents.empty();
    if ((samples_incidents || config_.policy == SimPolicy::kSelector) &&
        inputs_.model == nullptr) {
      throw ConfigError("policy '" + to_string(config_.policy) +
                        "' requires a fitted hazard model (see fit-model)");
    }
  }

  void setup_nodes() {
    nodes_.resize(config_.cluster_size);
    for (int i = 0; i < config_.cluster_size; ++i) {
      char name[16];
      std::snprintf(name, sizeof(name), "node%03d", i);
      nodes_[i].id = name;
      free_nodes_.push_back(i);
    }
    for (const ScheduledIncident& s : inputs_.scheduled_incidents) {
      for (NodeRt& n : nodes_) {
        if (n.id == s.node_id) {
          n.schedule.emplace_back(to_seconds(s.at_hours), s.category);
        }
      }
    }
    for (NodeRt& n : nodes_) {
      std::sort(n.schedule.begin(), n.schedule.end());
    }
  }

  void setup_arrivals() {
    std::vector<AllocationRequest> requests =
        config_.use_stressed_replay
            ? stressed_replay(inputs_.allocations, config_.cluster_size)
            : inputs_.allocations;
    std::int64_t t0 = requests.front().submit_ts;
    for (const AllocationRequest& r : requests) {
      t0 = std::min(t0, r.submit_ts);
    }
    for (const AllocationRequest& r : requests) {
      if (r.node_count < 1 || r.duration_hours <= 0.0) {
        throw InvalidInputError("allocation request needs node_count >= 1 and a positive duration");
      }
      if (r.node_count > config_.cluster_size) {
        ++skipped_;
        log(to_hours(r.submit_ts - t0), "skip",
            "request for " + std::to_string(r.node_count) +
                " nodes exceeds cluster size");
        continue;
      }
      Job job;
      job.id = static_cast<int>(jobs_.size());
      job.size = r.node_count;
      job.remaining = to_seconds(r.duration_hours);
      jobs_.push_back(job);
      push_event(r.submit_ts - t0, Event::kArrival, job.id);
    }
  }

  void push_event(std::int64_t t, Event::Kind kind, int index) {
    events_.push(Event{t, next_seq_++, kind, index});
  }

  void log(double t_hours, const std::string& kind, const std::string& detail) {
    if (config_.record_audit) audit_.push_back({t_hours, kind, detail});
  }

  static std::int64_t& bucket(NodeRt& n) {
    switch (n.state) {
      case NodeState::kIdle:
        return n.idle;
      case NodeState::kValidating:
        return n.validation;
      case NodeState::kRunning:
        return n.up;
      case NodeState::kRepairing:
        return n.down;
    }
    return n.idle;
  }

  void accrue(NodeRt& n, std::int64_t t) {
    bucket(n) += t - n.state_since;
    n.state_since = t;
  }

  void set_state(NodeRt& n, NodeState state, std::int64_t t) {
    accrue(n, t);
    n.state = state;
  }

  NodeStatus status_of(const NodeRt& n, std::int64_t t) const {
    NodeStatus s;
    s.node_id = n.id;
    s.uptime_hours = to_hours(t - n.down);
    s.hours_since_last_incident = to_hours(t - n.last_event_end);
    s.incident_counts = n.counts;
    for (const auto& [category, count] : n.counts) {
      s.mtbi_hours[category] = count > 0 ? s.uptime_hours / count : 0.0;
    }
    s.observed_ts = t;
    return s;
  }

  std::string draw_category() {
    if (inputs_.category_weights.empty()) return "incident";
    double total = 0.0;
    for (const auto& [category, w] : inputs_.category_weights) total += w;
    double u = uniform01(rng_) * total;
    for (const auto& [category, w] : inputs_.category_weights) {
      u -= w;
      if (u < 0.0) return category;
    }
    return inputs_.category_weights.back().first;
  }

  void on_arrival(std::int64_t t, int job_index) {
    job_queue_.push_back(job_index);
    log(to_hours(t), "arrival",
        "job " + std::to_string(job_index) + " size " +
            std::to_string(jobs_[job_index].size));
  }

  void try_schedule(std::int64_t t) {
    while (!job_queue_.empty()) {
      const int job_index = job_queue_.front();
      const Job& job = jobs_[job_index];
      if (static_cast<int>(free_nodes_.size()) < job.size) return;
      job_queue_.pop_front();
      std::vector<int> taken(free_nodes_.begin(),
                             free_nodes_.begin() + job.size);
      free_nodes_.erase(free_nodes_.begin(), free_nodes_.begin() + job.size);
      start_allocation(t, job_index, std::move(taken));
    }
  }

  void start_allocation(std::int64_t t, int job_index, std::vector<int> taken) {
    Job& job = jobs_[job_index];
    Allocation alloc;
    alloc.job = job_index;
    alloc.nodes = std::move(taken);

    // Policy hook: how long validation runs and what it would cover.
    bool validate_now = false;
    std::int64_t validation_seconds = 0;
    double catch_probability = 0.0;
    if (config_.policy == SimPolicy::kFullSet) {
      validate_now = true;
      validation_seconds = to_seconds(full_set_seconds_ / 3600.0);
      catch_probability = coverage(inputs_.benchmarks, full_set_ids_);
    } else if (config_.policy == SimPolicy::kSelector) {
      std::vector<NodeStatus> statuses;
      statuses.reserve(alloc.nodes.size());
      for (int idx : alloc.nodes) statuses.push_back(status_of(nodes_[idx], t));
      const double t0 = config_.t0_hours.value_or(to_hours(job.remaining));
      const SelectionOutcome outcome = select_benchmarks(
          statuses, inputs_.benchmarks, *inputs_.model, config_.p0, t0);
      if (!outcome.skipped) {
        validate_now = true;
        validation_seconds = to_seconds(outcome.total_time_seconds / 3600.0);
        catch_probability = outcome.coverage;
        log(to_hours(t), "select",
            "job " + std::to_string(job_index) + " subset size " +
                std::to_string(outcome.selected_ids.size()) + " coverage " +
                std::to_string(outcome.coverage));
      } else {
        log(to_hours(t), "select_skip",
            "job " + std::to_string(job_index) + " p " +
                std::to_string(outcome.initial_probability) + " <= p0");
      }
    }

    alloc.run_start = t + validation_seconds;

    // Plan incidents for this allocation window.
    if (config_.policy != SimPolicy::kIdeal) {
      for (int idx : alloc.nodes) {
        NodeRt& node = nodes_[idx];
        std::int64_t incident_at = -1;
        std::string category;
        if (scheduled_mode_) {
          if (node.sched_next < node.schedule.size()) {
            const auto& [at, cat] = node.schedule[node.sched_next];
            if (at < alloc.run_start + job.remaining) {
              incident_at = std::max(at, alloc.run_start);
              category = cat;
            }
          }
        } else {
          const NodeStatus status = status_of(node, t);
          const double u = uniform01(rng_);
          const double tbni_hours = inputs_.model->sample_tbni(status, u);
          const std::int64_t tbni = std::isfinite(tbni_hours)
                                        ? to_seconds(tbni_hours)
                                        : std::numeric_limits<std::int64_t>::max();
          if (tbni < job.remaining) {
            incident_at = alloc.run_start + tbni;
            category = draw_category();
          }
        }
        if (incident_at < 0) continue;
        const bool caught =
            validate_now && uniform01(rng_) < catch_probability;
        if (caught) {
          alloc.caught_nodes.push_back(idx);
          alloc.caught_categories.push_back(category);
          if (scheduled_mode_) ++node.sched_next;  // defect found and repaired
        } else if (!alloc.missed.has_value() || incident_at < alloc.missed->at) {
          alloc.missed = PlannedIncident{idx, incident_at, category};
        }
      }
    }

    const int alloc_index = static_cast<int>(allocations_.size());
    allocations_.push_back(std::move(alloc));
    if (validate_now) {
      for (int idx : allocations_[alloc_index].nodes) {
        set_state(nodes_[idx], NodeState::kValidating, t);
      }
      log(to_hours(t), "validation_start",
          "job " + std::to_string(job_index) + " for " +
              std::to_string(to_hours(validation_seconds)) + " h");
      push_event(t + validation_seconds, Event::kValidationEnd, alloc_index);
    } else {
      begin_run(t, alloc_index);
    }
  }

  void on_validation_end(std::int64_t t, int alloc_index) {
    Allocation& alloc = allocations_[alloc_index];
    if (alloc.caught_nodes.empty()) {
      begin_run(t, alloc_index);
      return;
    }
    // Defects found before the run: fast repair for them, everything else
    // re-queues.
    for (std::size_t i = 0; i < alloc.caught_nodes.size(); ++i) {
      NodeRt& node = nodes_[alloc.caught_nodes[i]];
      node.caught += 1;
      node.counts[alloc.caught_categories[i]] += 1;
      set_state(node, NodeState::kRepairing, t);
      push_event(t + to_seconds(config_.repair_with_validation_hours),
                 Event::kRepairDone, alloc.caught_nodes[i]);
      log(to_hours(t), "caught",
          "node " + node.id + " category " + alloc.caught_categories[i]);
    }
    for (int idx : alloc.nodes) {
      if (std::find(alloc.caught_nodes.begin(), alloc.caught_nodes.end(),
                    idx) != alloc.caught_nodes.end()) {
        continue;
      }
      set_state(nodes_[idx], NodeState::kIdle, t);
      free_nodes_.push_back(idx);
    }
    job_queue_.push_back(alloc.job);
  }

  void begin_run(std::int64_t t, int alloc_index) {
    Allocation& alloc = allocations_[alloc_index];
    alloc.run_start = t;
    for (int idx : alloc.nodes) {
      set_state(nodes_[idx], NodeState::kRunning, t);
    }
    log(to_hours(t), "run_start", "job " + std::to_string(alloc.job));
    const Job& job = jobs_[alloc.job];
    std::int64_t end = t + job.remaining;
    if (alloc.missed.has_value()) {
      end = std::min(end, alloc.missed->at);
    }
    push_event(end, Event::kRunEnd, alloc_index);
  }

  void on_run_end(std::int64_t t, int alloc_index) {
    Allocation& alloc = allocations_[alloc_index];
    Job& job = jobs_[alloc.job];
    const bool interrupted =
        alloc.missed.has_value() && alloc.missed->at == t &&
        t < alloc.run_start + job.remaining;
    job.remaining -= t - alloc.run_start;

    for (int idx : alloc.nodes) {
      NodeRt& node = nodes_[idx];
      if (interrupted && idx == alloc.missed->node) {
        node.incidents += 1;
        node.counts[alloc.missed->category] += 1;
        if (scheduled_mode_) ++node.sched_next;
        const double repair_hours = config_.policy == SimPolicy::kAbsence
                                        ? config_.repair_no_validation_hours
                                        : config_.repair_with_validation_hours;
        set_state(node, NodeState::kRepairing, t);
        push_event(t + to_seconds(repair_hours), Event::kRepairDone, idx);
        log(to_hours(t), "incident",
            "node " + node.id + " category " + alloc.missed->category +
                " interrupts job " + std::to_string(alloc.job));
      } else {
        set_state(node, NodeState::kIdle, t);
        free_nodes_.push_back(idx);
      }
    }

    if (interrupted) {
      job_queue_.push_back(alloc.job);  // resumes where it left off
    } else {
      ++completed_;
      log(to_hours(t), "finish", "job " + std::to_string(alloc.job));
    }
  }

  void on_repair_done(std::int64_t t, int node_index) {
    NodeRt& node = nodes_[node_index];
    node.last_event_end = t;
    set_state(node, NodeState::kIdle, t);
    free_nodes_.push_back(node_index);
    log(to_hours(t), "repair_done", "node " + node.id);
  }

  const SimConfig& config_;
  const SimInputs& inputs_;
  std::mt19937_64 rng_;
  std::int64_t horizon_ = 0;
  bool scheduled_mode_ = false;
  std::vector<std::string> full_set_ids_;
  double full_set_seconds_ = 0.0;

  std::vector<NodeRt> nodes_;
  std::vector<Job> jobs_;
  std::vector<Allocation> allocations_;
  std::deque<int> job_queue_;
  std::deque<int> free_nodes_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::uint64_t next_seq_ = 0;
  int completed_ = 0;
  int skipped_ = 0;
  std::vector<AuditEvent> audit_;
};

}  // namespace

SimReport run_simulation(const SimConfig& config, const SimInputs& inputs) {
  Engine engine(config, inputs);
  return engine.run();
}

SimReport compute_metrics(const std::vector<SimNodeStats>& nodes,
                          double horizon_hours) {
  if (nodes.empty()) {
    throw InvalidInputError("compute_metrics needs at least one node");
  }
  if (horizon_hours <= 0.0) {
    throw InvalidInputError("horizon must be positive");
  }
  SimReport report;
  report.horizon_hours = horizon_hours;
  double total_up = 0.0;
  double total_validation = 0.0;
  long total_incidents = 0;
  long total_caught = 0;
  for (const SimNodeStats& n : nodes) {
    total_up += n.up_hours;
    total_validation += n.validation_hours;
    total_incidents += n.incidents;
    total_caught += n.defects_caught;
  }
  const double count = static_cast<double>(nodes.size());
  report.avg_utilization = total_up / (horizon_hours * count);
  report.avg_validation_hours = total_validation / count;
  report.mtbi_hours = total_incidents > 0
                          ? total_up / static_cast<double>(total_incidents)
                          : std::numeric_limits<double>::infinity();
  report.incidents_per_node = static_cast<double>(total_incidents) / count;
  report.defects_caught_per_node = static_cast<double>(total_caught) / count;
  report.nodes = nodes;
  return report;
}

}  // namespace fleetval
