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

#include "fleetval/records.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fleetval/error.hpp"

namespace fleetval {

namespace {

using nlohmann::json;

constexpr const char* kSamplesSchema = "samples/v1";
constexpr const char* kCriteriaSchema = "criteria/v1";
constexpr const char* kVerdictsSchema = "verdicts/v1";
constexpr const char* kIncidentsSchema = "incidents/v1";
constexpr const char* kAllocationsSchema = "allocations/v1";
constexpr const char* kCoverageSchema = "coverage/v1";
constexpr const char* kStatusesSchema = "statuses/v1";
constexpr const char* kModelSchema = "model/v1";
constexpr const char* kSelectionSchema = "selection/v1";
constexpr const char* kNicsSchema = "nics/v1";
constexpr const char* kTopologySchema = "topology/v1";
constexpr const char* kScheduleSchema = "schedule/v1";
constexpr const char* kSimConfigSchema = "simconfig/v1";
constexpr const char* kReportSchema = "report/v1";
constexpr const char* kAuditSchema = "audit/v1";

// Streams schema-checked records with line numbers for diagnostics.
class RecordReader {
 public:
  RecordReader(const std::filesystem::path& path, const char* schema)
      : path_(path.string()), in_(path) {
    if (!in_) {
      throw ParseError(path_, 0, "cannot open file");
    }
    json header = next_json(true);
    if (!header.is_object() || !header.contains("schema") ||
        !header["schema"].is_string()) {
      throw ParseError(path_, line_, "first record must carry a schema field");
    }
    if (header["schema"].get<std::string>() != schema) {
      throw ParseError(path_, line_,
                       "schema mismatch: expected '" + std::string(schema) +
                           "', found '" +
                           header["schema"].get<std::string>() + "'");
    }
  }

  std::optional<json> next() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      if (raw.empty()) continue;
      return parse(raw);
    }
    return std::nullopt;
  }

  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(path_, line_, message);
  }

 private:
  json next_json(bool required) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      if (raw.empty()) continue;
      return parse(raw);
    }
    if (required) throw ParseError(path_, line_, "unexpected end of file");
    return json();
  }

  json parse(const std::string& raw) {
    try {
      return json::parse(raw);
    } catch (const json::exception& e) {
      throw ParseError(path_, line_, e.what());
    }
  }

  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

template <typename T>
T field(const RecordReader& reader, const json& record, const char* name) {
  if (!record.contains(name)) {
    reader.fail("missing field '" + std::string(name) + "'");
  }
  try {
    return record.at(name).get<T>();
  } catch (const json::exception&) {
    reader.fail("field '" + std::string(name) + "' has the wrong type");
  }
}

void emit(std::ostream& os, const json& record) { os << record.dump() << "\n"; }

void emit_header(std::ostream& os, const char* schema) {
  emit(os, json{{"schema", schema}});
}

json direction_json(Direction d) { return to_string(d); }

}  // namespace

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer) {
  const std::filesystem::path parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw Error("cannot open '" + tmp.string() + "' for writing");
    try {
      writer(os);
    } catch (...) {
      os.close();
      std::filesystem::remove(tmp);
      throw;
    }
    os.flush();
    if (!os) {
      os.close();
      std::filesystem::remove(tmp);
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

// ---- samples ----

std::vector<MetricSample> read_samples(const std::filesystem::path& path) {
  RecordReader reader(path, kSamplesSchema);
  std::vector<MetricSample> samples;
  std::map<std::string, Direction> directions;
  while (auto record = reader.next()) {
    MetricSample s;
    s.metric_id = field<std::string>(reader, *record, "metric_id");
    s.node_id = field<std::string>(reader, *record, "node_id");
    const std::string dir = field<std::string>(reader, *record, "direction");
    try {
      s.direction = direction_from_string(dir);
    } catch (const InvalidInputError& e) {
      reader.fail(e.what());
    }
    s.values = field<std::vector<double>>(reader, *record, "values");
    try {
      s.validate();
    } catch (const InvalidInputError& e) {
      reader.fail(e.what());
    }
    auto [it, inserted] = directions.emplace(s.metric_id, s.direction);
    if (!inserted && it->second != s.direction) {
      reader.fail("metric '" + s.metric_id +
                  "' changes direction mid-dataset");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_samples(const std::filesystem::path& path,
                   const std::vector<MetricSample>& samples) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kSamplesSchema);
    for (const MetricSample& s : samples) {
      emit(os, json{{"metric_id", s.metric_id},
                    {"node_id", s.node_id},
                    {"direction", direction_json(s.direction)},
                    {"values", s.values}});
    }
  });
}

// ---- criteria ----

std::vector<Criteria> read_criteria(const std::filesystem::path& path) {
  RecordReader reader(path, kCriteriaSchema);
  std::vector<Criteria> criteria;
  while (auto record = reader.next()) {
    Criteria c;
    c.metric_id = field<std::string>(reader, *record, "metric_id");
    try {
      c.direction = direction_from_string(
          field<std::string>(reader, *record, "direction"));
    } catch (const InvalidInputError& e) {
      reader.fail(e.what());
    }
    c.alpha = field<double>(reader, *record, "alpha");
    if (c.alpha <= 0.0 || c.alpha >= 1.0) {
      reader.fail("alpha must lie in (0, 1)");
    }
    c.reference.metric_id = c.metric_id;
    c.reference.node_id =
        field<std::string>(reader, *record, "reference_node_id");
    c.reference.direction = c.direction;
    c.reference.values =
        field<std::vector<double>>(reader, *record, "reference_values");
    try {
      c.reference.validate();
    } catch (const InvalidInputError& e) {
      reader.fail(e.what());
    }
    criteria.push_back(std::move(c));
  }
  return criteria;
}

void write_criteria(const std::filesystem::path& path,
                    const std::vector<Criteria>& criteria) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kCriteriaSchema);
    for (const Criteria& c : criteria) {
      emit(os, json{{"metric_id", c.metric_id},
                    {"direction", direction_json(c.direction)},
                    {"alpha", c.alpha},
                    {"reference_node_id", c.reference.node_id},
                    {"reference_values", c.reference.values}});
    }
  });
}

// ---- verdicts ----

std::vector<ValidationVerdict> read_verdicts(
    const std::filesystem::path& path) {
  RecordReader reader(path, kVerdictsSchema);
  std::vector<ValidationVerdict> verdicts;
  while (auto record = reader.next()) {
    ValidationVerdict v;
    v.node_id = field<std::string>(reader, *record, "node_id");
    v.defect = field<bool>(reader, *record, "defect");
    v.violating_metrics =
        field<std::vector<std::string>>(reader, *record, "violating_metrics");
    v.scores = field<std::map<std::string, double>>(reader, *record, "scores");
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

void write_verdicts(const std::filesystem::path& path,
                    const std::vector<ValidationVerdict>& verdicts) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kVerdictsSchema);
    for (const ValidationVerdict& v : verdicts) {
      emit(os, json{{"node_id", v.node_id},
                    {"defect", v.defect},
                    {"violating_metrics", v.violating_metrics},
                    {"scores", v.scores}});
    }
  });
}

// ---- incidents ----

std::vector<IncidentEvent> read_incidents(const std::filesystem::path& path) {
  RecordReader reader(path, kIncidentsSchema);
  std::vector<IncidentEvent> incidents;
  while (auto record = reader.next()) {
    IncidentEvent e;
    e.node_id = field<std::string>(reader, *record, "node_id");
    e.start_ts = field<std::int64_t>(reader, *record, "start_ts");
    e.end_ts = field<std::int64_t>(reader, *record, "end_ts");
    e.category = field<std::string>(reader, *record, "category");
    e.component = field<std::string>(reader, *record, "component");
    if (e.end_ts < e.start_ts) {
      reader.fail("incident ends before it starts");
    }
    incidents.push_back(std::move(e));
  }
  return incidents;
}

void write_incidents(const std::filesystem::path& path,
                     const std::vector<IncidentEvent>& incidents) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kIncidentsSchema);
    for (const IncidentEvent& e : incidents) {
      emit(os, json{{"node_id", e.node_id},
                    {"start_ts", e.start_ts},
                    {"end_ts", e.end_ts},
                    {"category", e.category},
                    {"component", e.component}});
    }
  });
}

// ---- allocations ----

std::vector<AllocationRequest> read_allocations(
    const std::filesystem::path& path) {
  RecordReader reader(path, kAllocationsSchema);
  std::vector<AllocationRequest> requests;
  while (auto record = reader.next()) {
    AllocationRequest r;
    r.node_count = field<int>(reader, *record, "node_count");
    r.submit_ts = field<std::int64_t>(reader, *record, "submit_ts");
    r.duration_hours = field<double>(reader, *record, "duration_hours");
    if (r.node_count < 1) reader.fail("node_count must be >= 1");
    if (r.duration_hours <= 0.0) reader.fail("duration_hours must be > 0");
    requests.push_back(r);
  }
  return requests;
}

void write_allocations(const std::filesystem::path& path,
                       const std::vector<AllocationRequest>& requests) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kAllocationsSchema);
    for (const AllocationRequest& r : requests) {
      emit(os, json{{"node_count", r.node_count},
                    {"submit_ts", r.submit_ts},
                    {"duration_hours", r.duration_hours}});
    }
  });
}

// ---- coverage ----

std::vector<BenchmarkInfo> read_coverage(const std::filesystem::path& path) {
  RecordReader reader(path, kCoverageSchema);
  std::vector<BenchmarkInfo> benchmarks;
  while (auto record = reader.next()) {
    BenchmarkInfo b;
    b.benchmark_id = field<std::string>(reader, *record, "benchmark_id");
    b.time_seconds = field<double>(reader, *record, "time_seconds");
    b.defect_node_ids =
        field<std::vector<std::string>>(reader, *record, "defect_node_ids");
    if (b.time_seconds <= 0.0) reader.fail("time_seconds must be > 0");
    benchmarks.push_back(std::move(b));
  }
  return benchmarks;
}

void write_coverage(const std::filesystem::path& path,
                    const std::vector<BenchmarkInfo>& benchmarks) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kCoverageSchema);
    for (const BenchmarkInfo& b : benchmarks) {
      emit(os, json{{"benchmark_id", b.benchmark_id},
                    {"time_seconds", b.time_seconds},
                    {"defect_node_ids", b.defect_node_ids}});
    }
  });
}

// ---- statuses ----

std::vector<NodeStatus> read_statuses(const std::filesystem::path& path) {
  RecordReader reader(path, kStatusesSchema);
  std::vector<NodeStatus> statuses;
  while (auto record = reader.next()) {
    NodeStatus s;
    s.node_id = field<std::string>(reader, *record, "node_id");
    s.uptime_hours = field<double>(reader, *record, "uptime_hours");
    s.hours_since_last_incident =
        field<double>(reader, *record, "hours_since_last_incident");
    s.incident_counts =
        field<std::map<std::string, int>>(reader, *record, "incident_counts");
    s.mtbi_hours =
        field<std::map<std::string, double>>(reader, *record, "mtbi_hours");
    s.observed_ts = field<std::int64_t>(reader, *record, "observed_ts");
    if (s.uptime_hours < 0.0 || s.hours_since_last_incident < 0.0) {
      reader.fail("durations must be >= 0");
    }
    statuses.push_back(std::move(s));
  }
  return statuses;
}

void write_statuses(const std::filesystem::path& path,
                    const std::vector<NodeStatus>& statuses) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kStatusesSchema);
    for (const NodeStatus& s : statuses) {
      emit(os, json{{"node_id", s.node_id},
                    {"uptime_hours", s.uptime_hours},
                    {"hours_since_last_incident", s.hours_since_last_incident},
                    {"incident_counts", s.incident_counts},
                    {"mtbi_hours", s.mtbi_hours},
                    {"observed_ts", s.observed_ts}});
    }
  });
}

// ---- model ----

HazardModel read_model(const std::filesystem::path& path) {
  RecordReader reader(path, kModelSchema);
  auto record = reader.next();
  if (!record.has_value()) reader.fail("model document has no record");
  const std::string variant = field<std::string>(reader, *record, "variant");
  if (variant == "exponential") {
    HazardModel::ExponentialParams p;
    p.lambda = field<double>(reader, *record, "lambda");
    return HazardModel(p);
  }
  if (variant == "exponential_per_incident_count") {
    const auto raw = field<std::map<std::string, double>>(reader, *record,
                                                          "lambda_by_count");
    HazardModel::PerCountParams p;
    for (const auto& [count, lambda] : raw) {
      try {
        p.lambda_by_count[std::stoi(count)] = lambda;
      } catch (const std::exception&) {
        reader.fail("lambda_by_count key '" + count + "' is not an integer");
      }
    }
    return HazardModel(p);
  }
  if (variant == "exponential_per_hour") {
    HazardModel::PerHourParams p;
    p.survival = field<std::vector<double>>(reader, *record, "survival");
    return HazardModel(p);
  }
  if (variant == "cox_linear") {
    HazardModel::CoxParams p;
    p.covariate_names =
        field<std::vector<std::string>>(reader, *record, "covariate_names");
    p.coefficients =
        field<std::vector<double>>(reader, *record, "coefficients");
    p.means = field<std::vector<double>>(reader, *record, "means");
    p.stddevs = field<std::vector<double>>(reader, *record, "stddevs");
    p.baseline_times =
        field<std::vector<double>>(reader, *record, "baseline_times");
    p.baseline_cumhaz =
        field<std::vector<double>>(reader, *record, "baseline_cumhaz");
    return HazardModel(p);
  }
  reader.fail("unknown model variant '" + variant + "'");
}

void write_model(const std::filesystem::path& path, const HazardModel& model) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kModelSchema);
    json record{{"variant", to_string(model.variant())}};
    if (const auto* p = model.exponential_params()) {
      record["lambda"] = p->lambda;
    } else if (const auto* p = model.per_count_params()) {
      json by_count = json::object();
      for (const auto& [count, lambda] : p->lambda_by_count) {
        by_count[std::to_string(count)] = lambda;
      }
      record["lambda_by_count"] = by_count;
    } else if (const auto* p = model.per_hour_params()) {
      record["survival"] = p->survival;
    } else if (const auto* p = model.cox_params()) {
      record["covariate_names"] = p->covariate_names;
      record["coefficients"] = p->coefficients;
      record["means"] = p->means;
      record["stddevs"] = p->stddevs;
      record["baseline_times"] = p->baseline_times;
      record["baseline_cumhaz"] = p->baseline_cumhaz;
    }
    emit(os, record);
  });
}

// ---- selection ----

SelectionDocument read_selection(const std::filesystem::path& path) {
  RecordReader reader(path, kSelectionSchema);
  auto record = reader.next();
  if (!record.has_value()) reader.fail("selection document has no record");
  SelectionDocument d;
  d.outcome.selected_ids =
      field<std::vector<std::string>>(reader, *record, "selected");
  d.outcome.coverage = field<double>(reader, *record, "coverage");
  d.outcome.initial_probability =
      field<double>(reader, *record, "initial_probability");
  d.outcome.residual_probability =
      field<double>(reader, *record, "residual_probability");
  d.outcome.total_time_seconds =
      field<double>(reader, *record, "total_time_seconds");
  d.outcome.skipped = field<bool>(reader, *record, "skipped");
  d.p0 = field<double>(reader, *record, "p0");
  d.t0_hours = field<double>(reader, *record, "t0_hours");
  return d;
}

void write_selection(const std::filesystem::path& path,
                     const SelectionDocument& document) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kSelectionSchema);
    emit(os, json{{"selected", document.outcome.selected_ids},
                  {"coverage", document.outcome.coverage},
                  {"initial_probability", document.outcome.initial_probability},
                  {"residual_probability",
                   document.outcome.residual_probability},
                  {"total_time_seconds", document.outcome.total_time_seconds},
                  {"skipped", document.outcome.skipped},
                  {"p0", document.p0},
                  {"t0_hours", document.t0_hours}});
  });
}

// ---- nics ----

std::vector<std::string> read_nics(const std::filesystem::path& path) {
  RecordReader reader(path, kNicsSchema);
  std::vector<std::string> ids;
  while (auto record = reader.next()) {
    ids.push_back(field<std::string>(reader, *record, "id"));
  }
  return ids;
}

void write_nics(const std::filesystem::path& path,
                const std::vector<std::string>& nic_ids) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kNicsSchema);
    for (const std::string& id : nic_ids) emit(os, json{{"id", id}});
  });
}

// ---- topology ----

FatTreeTopology read_topology(const std::filesystem::path& path) {
  RecordReader reader(path, kTopologySchema);
  std::vector<SwitchInfo> switches;
  std::map<std::string, std::string> node_to_tor;
  while (auto record = reader.next()) {
    const std::string kind = field<std::string>(reader, *record, "kind");
    if (kind == "switch") {
      SwitchInfo s;
      s.id = field<std::string>(reader, *record, "id");
      s.tier = field<int>(reader, *record, "tier");
      if (record->contains("parent") && !(*record)["parent"].is_null()) {
        s.parent = field<std::string>(reader, *record, "parent");
      }
      switches.push_back(std::move(s));
    } else if (kind == "node") {
      const std::string id = field<std::string>(reader, *record, "id");
      const std::string tor = field<std::string>(reader, *record, "tor");
      if (!node_to_tor.emplace(id, tor).second) {
        reader.fail("node '" + id + "' attached twice");
      }
    } else {
      reader.fail("unknown record kind '" + kind + "'");
    }
  }
  try {
    return FatTreeTopology(std::move(switches), std::move(node_to_tor));
  } catch (const InvalidInputError& e) {
    reader.fail(e.what());
  }
}

void write_topology(const std::filesystem::path& path,
                    const FatTreeTopology& topology) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kTopologySchema);
    for (const SwitchInfo& s : topology.switches()) {
      json record{{"kind", "switch"}, {"id", s.id}, {"tier", s.tier}};
      record["parent"] = s.parent.empty() ? json() : json(s.parent);
      emit(os, record);
    }
    for (const auto& [node, tor] : topology.node_to_tor()) {
      emit(os, json{{"kind", "node"}, {"id", node}, {"tor", tor}});
    }
  });
}

// ---- schedule ----

ScheduleDocument read_schedule(const std::filesystem::path& path) {
  RecordReader reader(path, kScheduleSchema);
  auto head = reader.next();
  if (!head.has_value()) reader.fail("schedule document has no records");
  ScheduleDocument d;
  try {
    d.schedule.mode =
        scan_mode_from_string(field<std::string>(reader, *head, "mode"));
  } catch (const InvalidInputError& e) {
    reader.fail(e.what());
  }
  d.schedule.universe =
      field<std::vector<std::string>>(reader, *head, "universe");
  while (auto record = reader.next()) {
    if (record->contains("round")) {
      ScanRound round;
      round.hop_distance = field<int>(reader, *record, "hop_distance");
      if (!record->contains("pairs") || !(*record)["pairs"].is_array()) {
        reader.fail("round record needs a pairs array");
      }
      for (const json& p : (*record)["pairs"]) {
        ScanPair pair;
        pair.a = field<std::string>(reader, p, "a");
        pair.b = field<std::string>(reader, p, "b");
        pair.duplicate_use = field<bool>(reader, p, "duplicate_use");
        round.pairs.push_back(std::move(pair));
      }
      d.schedule.rounds.push_back(std::move(round));
    } else if (record->contains("verification_ok")) {
      if (record->contains("violations")) {
        for (const json& v : (*record)["violations"]) {
          d.verification.violations.push_back(
              {field<std::string>(reader, v, "kind"),
               field<std::string>(reader, v, "message")});
        }
      }
    } else {
      reader.fail("unrecognized schedule record");
    }
  }
  return d;
}

void write_schedule(const std::filesystem::path& path,
                    const ScheduleDocument& document) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kScheduleSchema);
    emit(os, json{{"mode", to_string(document.schedule.mode)},
                  {"universe", document.schedule.universe}});
    for (std::size_t r = 0; r < document.schedule.rounds.size(); ++r) {
      const ScanRound& round = document.schedule.rounds[r];
      json pairs = json::array();
      for (const ScanPair& p : round.pairs) {
        pairs.push_back(json{
            {"a", p.a}, {"b", p.b}, {"duplicate_use", p.duplicate_use}});
      }
      emit(os, json{{"round", r + 1},
                    {"hop_distance", round.hop_distance},
                    {"pairs", pairs}});
    }
    json violations = json::array();
    for (const ScanViolation& v : document.verification.violations) {
      violations.push_back(json{{"kind", v.kind}, {"message", v.message}});
    }
    emit(os, json{{"verification_ok", document.verification.ok()},
                  {"violations", violations}});
  });
}

// ---- simulation config / reports / audit ----

SimBatchConfig read_sim_config(const std::filesystem::path& path) {
  RecordReader reader(path, kSimConfigSchema);
  auto record = reader.next();
  if (!record.has_value()) reader.fail("sim config has no record");
  SimBatchConfig c;
  for (const std::string& name :
       field<std::vector<std::string>>(reader, *record, "policies")) {
    try {
      c.policies.push_back(sim_policy_from_string(name));
    } catch (const InvalidInputError& e) {
      reader.fail(e.what());
    }
  }
  if (c.policies.empty()) reader.fail("policies list is empty");
  c.base.horizon_hours = field<double>(reader, *record, "horizon_hours");
  c.base.repair_no_validation_hours =
      field<double>(reader, *record, "repair_no_validation_hours");
  c.base.repair_with_validation_hours =
      field<double>(reader, *record, "repair_with_validation_hours");
  c.base.p0 = field<double>(reader, *record, "p0");
  if (record->contains("t0_hours") && !(*record)["t0_hours"].is_null()) {
    c.base.t0_hours = field<double>(reader, *record, "t0_hours");
  }
  c.base.seed = field<std::uint64_t>(reader, *record, "seed");
  c.base.cluster_size = field<int>(reader, *record, "cluster_size");
  c.base.use_stressed_replay =
      field<bool>(reader, *record, "stressed_replay");
  const auto dir = path.parent_path();
  auto resolve = [&dir](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() || dir.empty() ? fp : dir / fp;
  };
  c.incident_trace =
      resolve(field<std::string>(reader, *record, "incident_trace"));
  c.allocation_trace =
      resolve(field<std::string>(reader, *record, "allocation_trace"));
  c.coverage_table =
      resolve(field<std::string>(reader, *record, "coverage_table"));
  if (record->contains("model") && !(*record)["model"].is_null()) {
    c.model = resolve(field<std::string>(reader, *record, "model"));
  }
  return c;
}

void write_sim_config(const std::filesystem::path& path,
                      const SimBatchConfig& config) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kSimConfigSchema);
    json policies = json::array();
    for (SimPolicy p : config.policies) policies.push_back(to_string(p));
    json record{{"policies", policies},
                {"horizon_hours", config.base.horizon_hours},
                {"repair_no_validation_hours",
                 config.base.repair_no_validation_hours},
                {"repair_with_validation_hours",
                 config.base.repair_with_validation_hours},
                {"p0", config.base.p0},
                {"seed", config.base.seed},
                {"cluster_size", config.base.cluster_size},
                {"stressed_replay", config.base.use_stressed_replay},
                {"incident_trace", config.incident_trace.string()},
                {"allocation_trace", config.allocation_trace.string()},
                {"coverage_table", config.coverage_table.string()}};
    record["t0_hours"] = config.base.t0_hours.has_value()
                             ? json(*config.base.t0_hours)
                             : json();
    record["model"] =
        config.model.empty() ? json() : json(config.model.string());
    emit(os, record);
  });
}

namespace {

json report_json(const SimReport& report, const SimBatchConfig& config) {
  json record{{"policy", to_string(report.policy)},
              {"seed", report.seed},
              {"horizon_hours", report.horizon_hours},
              {"avg_utilization", report.avg_utilization},
              {"avg_validation_hours", report.avg_validation_hours},
              {"incidents_per_node", report.incidents_per_node},
              {"defects_caught_per_node", report.defects_caught_per_node},
              {"completed_jobs", report.completed_jobs},
              {"skipped_requests", report.skipped_requests}};
  record["mtbi_hours"] = std::isfinite(report.mtbi_hours)
                             ? json(report.mtbi_hours)
                             : json();
  record["config"] = json{
      {"p0", config.base.p0},
      {"t0_hours", config.base.t0_hours.has_value()
                       ? json(*config.base.t0_hours)
                       : json()},
      {"seed", config.base.seed},
      {"cluster_size", config.base.cluster_size},
      {"repair_no_validation_hours", config.base.repair_no_validation_hours},
      {"repair_with_validation_hours",
       config.base.repair_with_validation_hours},
      {"stressed_replay", config.base.use_stressed_replay}};
  return record;
}

}  // namespace

std::vector<SimReport> read_reports(const std::filesystem::path& path) {
  RecordReader reader(path, kReportSchema);
  std::vector<SimReport> reports;
  while (auto record = reader.next()) {
    SimReport r;
    try {
      r.policy =
          sim_policy_from_string(field<std::string>(reader, *record, "policy"));
    } catch (const InvalidInputError& e) {
      reader.fail(e.what());
    }
    r.seed = field<std::uint64_t>(reader, *record, "seed");
    r.horizon_hours = field<double>(reader, *record, "horizon_hours");
    r.avg_utilization = field<double>(reader, *record, "avg_utilization");
    r.avg_validation_hours =
        field<double>(reader, *record, "avg_validation_hours");
    r.mtbi_hours = (*record)["mtbi_hours"].is_null()
                       ? std::numeric_limits<double>::infinity()
                       : field<double>(reader, *record, "mtbi_hours");
    r.incidents_per_node = field<double>(reader, *record, "incidents_per_node");
    r.defects_caught_per_node =
        field<double>(reader, *record, "defects_caught_per_node");
    r.completed_jobs = field<int>(reader, *record, "completed_jobs");
    r.skipped_requests = field<int>(reader, *record, "skipped_requests");
    reports.push_back(std::move(r));
  }
  return reports;
}

void write_reports(const std::filesystem::path& path,
                   const std::vector<SimReport>& reports,
                   const SimBatchConfig& config) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kReportSchema);
    for (const SimReport& r : reports) emit(os, report_json(r, config));
  });
}

void write_audit(const std::filesystem::path& path,
                 const std::vector<AuditEvent>& events) {
  atomic_write(path, [&](std::ostream& os) {
    emit_header(os, kAuditSchema);
    for (const AuditEvent& e : events) {
      emit(os, json{{"t_hours", e.t_hours},
                    {"kind", e.kind},
                    {"detail", e.detail}});
    }
  });
}

}  // namespace fleetval
