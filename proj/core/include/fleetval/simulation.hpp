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
#include <optional>
#include <string>
#include <vector>

#include "fleetval/hazard.hpp"
#include "fleetval/selection.hpp"

namespace fleetval {

enum class SimPolicy {
  kAbsence,  // no validation; incidents repaired the slow way
  kFullSet,  // every allocation validated with the full benchmark set
  kSelector, // greedy subset selection per allocation
  kIdeal,    // no incidents at all
};

std::string to_string(SimPolicy policy);
SimPolicy sim_policy_from_string(const std::string& text);

struct AllocationRequest {
  int node_count = 1;
  std::int64_t submit_ts = 0;  // seconds
  double duration_hours = 0.0;
};

struct SimConfig {
  double horizon_hours = 720.0;
  double repair_no_validation_hours = 36.0;
  double repair_with_validation_hours = 1.0;
  double p0 = 0.1;
  std::optional<double> t0_hours;  // nullopt: use each job's duration
  std::uint64_t seed = 0;
  SimPolicy policy = SimPolicy::kAbsence;
  int cluster_size = 1;
  bool use_stressed_replay = true;
  bool record_audit = false;
};

/// Deterministic incident injected at an absolute time, used instead of
/// model sampling when any are supplied.
struct ScheduledIncident {
  std::string node_id;
  double at_hours = 0.0;
  std::string category;
};

struct SimInputs {
  const HazardModel* model = nullptr;  // needed unless Ideal or scheduled
  std::vector<std::pair<std::string, double>> category_weights;
  std::vector<BenchmarkInfo> benchmarks;
  std::vector<AllocationRequest> allocations;
  std::vector<ScheduledIncident> scheduled_incidents;
};

/// Per-node time accounting. The four buckets partition the simulated
/// horizon exactly: up + validation + down + idle == horizon.
struct SimNodeStats {
  std::string node_id;
  double up_hours = 0.0;          // running customer jobs
  double validation_hours = 0.0;  // running benchmarks
  double down_hours = 0.0;        // under repair
  double idle_hours = 0.0;        // waiting in the node queue
  int incidents = 0;              // incidents that interrupted a job
  int defects_caught = 0;         // defects found by validation pre-run
};

struct AuditEvent {
  double t_hours = 0.0;
  std::string kind;
  std::string detail;
};

struct SimReport {
  SimPolicy policy = SimPolicy::kAbsence;
  std::uint64_t seed = 0;
  double horizon_hours = 0.0;
  double avg_utilization = 0.0;
  double avg_validation_hours = 0.0;
  double mtbi_hours = 0.0;  // +infinity when no incidents occurred
  double incidents_per_node = 0.0;
  double defects_caught_per_node = 0.0;
  int completed_jobs = 0;
  int skipped_requests = 0;
  std::vector<SimNodeStats> nodes;
  std::vector<AuditEvent> audit;
};

/// Re-times allocation submissions so the cluster never sits idle waiting
/// for the next request: each submission is pulled forward to the point
/// where earlier work would drain (fluid estimate over cluster_size
/// nodes). Order, sizes, and durations are preserved.
std::vector<AllocationRequest> stressed_replay(
    const std::vector<AllocationRequest>& trace, int cluster_size);

/// Trace-driven discrete-event simulation of one policy over the horizon.
/// FIFO job and node queues; per-allocation incident sampling (seeded);
/// policy-dependent validation before each run; caught defects go to fast
/// repair and the job re-queues; missed incidents interrupt the job, which
/// later resumes where it left off.
SimReport run_simulation(const SimConfig& config, const SimInputs& inputs);

/// Aggregates per-node accounting into fleet metrics: mean utilization,
/// mean validation time, MTBI = total up time / total incidents (the
/// +infinity sentinel when no incidents occurred).
SimReport compute_metrics(const std::vector<SimNodeStats>& nodes,
                          double horizon_hours);

}  // namespace fleetval
