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
//
// Line-delimited record formats. Every file starts with a one-line header
// record carrying the schema version; a mismatch is a parse error, never a
// silent coercion. Writes go to a temporary file and are renamed into
// place, so no command leaves partial output behind.

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fleetval/criteria.hpp"
#include "fleetval/hazard.hpp"
#include "fleetval/metric_sample.hpp"
#include "fleetval/scan_plan.hpp"
#include "fleetval/selection.hpp"
#include "fleetval/simulation.hpp"
#include "fleetval/topology.hpp"

namespace fleetval {

/// Writes via a temp file in the same directory, renamed over the target
/// on success only.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

std::vector<MetricSample> read_samples(const std::filesystem::path& path);
void write_samples(const std::filesystem::path& path,
                   const std::vector<MetricSample>& samples);

std::vector<Criteria> read_criteria(const std::filesystem::path& path);
void write_criteria(const std::filesystem::path& path,
                    const std::vector<Criteria>& criteria);

std::vector<ValidationVerdict> read_verdicts(const std::filesystem::path& path);
void write_verdicts(const std::filesystem::path& path,
                    const std::vector<ValidationVerdict>& verdicts);

std::vector<IncidentEvent> read_incidents(const std::filesystem::path& path);
void write_incidents(const std::filesystem::path& path,
                     const std::vector<IncidentEvent>& incidents);

std::vector<AllocationRequest> read_allocations(
    const std::filesystem::path& path);
void write_allocations(const std::filesystem::path& path,
                       const std::vector<AllocationRequest>& requests);

std::vector<BenchmarkInfo> read_coverage(const std::filesystem::path& path);
void write_coverage(const std::filesystem::path& path,
                    const std::vector<BenchmarkInfo>& benchmarks);

std::vector<NodeStatus> read_statuses(const std::filesystem::path& path);
void write_statuses(const std::filesystem::path& path,
                    const std::vector<NodeStatus>& statuses);

HazardModel read_model(const std::filesystem::path& path);
void write_model(const std::filesystem::path& path, const HazardModel& model);

struct SelectionDocument {
  SelectionOutcome outcome;
  double p0 = 0.0;
  double t0_hours = 0.0;
};
SelectionDocument read_selection(const std::filesystem::path& path);
void write_selection(const std::filesystem::path& path,
                     const SelectionDocument& document);

std::vector<std::string> read_nics(const std::filesystem::path& path);
void write_nics(const std::filesystem::path& path,
                const std::vector<std::string>& nic_ids);

FatTreeTopology read_topology(const std::filesystem::path& path);
void write_topology(const std::filesystem::path& path,
                    const FatTreeTopology& topology);

struct ScheduleDocument {
  ScanSchedule schedule;
  ScanReport verification;
};
ScheduleDocument read_schedule(const std::filesystem::path& path);
void write_schedule(const std::filesystem::path& path,
                    const ScheduleDocument& document);

/// Batch simulation configuration: the shared SimConfig plus the policies
/// to sweep and the input file paths (resolved relative to the config
/// file's directory unless absolute).
struct SimBatchConfig {
  SimConfig base;
  std::vector<SimPolicy> policies;
  std::filesystem::path incident_trace;
  std::filesystem::path allocation_trace;
  std::filesystem::path coverage_table;
  std::filesystem::path model;  // optional when only ideal runs
};
SimBatchConfig read_sim_config(const std::filesystem::path& path);
void write_sim_config(const std::filesystem::path& path,
                      const SimBatchConfig& config);

std::vector<SimReport> read_reports(const std::filesystem::path& path);
void write_reports(const std::filesystem::path& path,
                   const std::vector<SimReport>& reports,
                   const SimBatchConfig& config);

void write_audit(const std::filesystem::path& path,
                 const std::vector<AuditEvent>& events);

}  // namespace fleetval
