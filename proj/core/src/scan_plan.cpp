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

#include "fleetval/scan_plan.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "fleetval/error.hpp"

namespace fleetval {

std::string to_string(ScanMode mode) {
  return mode == ScanMode::kFullScan ? "full" : "quick";
}

ScanMode scan_mode_from_string(const std::string& text) {
  if (text == "full") return ScanMode::kFullScan;
  if (text == "quick") return ScanMode::kQuickScan;
  throw InvalidInputError("unknown scan mode '" + text + "'");
}

ScanSchedule plan_full_scan(const std::vector<std::string>& nic_ids) {
  if (nic_ids.size() < 2) {
    throw InvalidInputError("full scan needs at least two NICs");
  }
  {
    std::set<std::string> unique(nic_ids.begin(), nic_ids.end());
    if (unique.size() != nic_ids.size()) {
      throw InvalidInputError("full scan NIC list contains duplicates");
    }
    if (unique.count(std::string())) {
      throw InvalidInputError("full scan NIC ids must be non-empty");
    }
  }

  // Pad an odd count with a bye slot; bye pairs are dropped.
  std::vector<std::string> slots = nic_ids;
  const bool padded = slots.size() % 2 != 0;
  if (padded) slots.emplace_back();
  const int n = static_cast<int>(slots.size());

  ScanSchedule schedule;
  schedule.mode = ScanMode::kFullScan;
  schedule.universe = nic_ids;
  std::sort(schedule.universe.begin(), schedule.universe.end());

  // Circle method: slot n-1 is fixed, the others rotate.
  for (int round = 0; round < n - 1; ++round) {
    ScanRound r;
    const int fixed_partner = round % (n - 1);
    if (!slots[n - 1].empty() && !slots[fixed_partner].empty()) {
      r.pairs.push_back({slots[n - 1], slots[fixed_partner], false});
    }
    for (int i = 1; i < n / 2; ++i) {
      const int a = (round + i) % (n - 1);
      const int b = (round - i + (n - 1)) % (n - 1);
      if (!slots[a].empty() && !slots[b].empty()) {
        r.pairs.push_back({slots[a], slots[b], false});
      }
    }
    schedule.rounds.push_back(std::move(r));
  }
  return schedule;
}

namespace {

struct NodeClass {
  std::string class_id;          // child switch id (or ToR for hop 1)
  std::deque<std::string> todo;  // unpaired nodes, sorted
  std::vector<std::string> used;
};

// Pairs nodes across distinct classes, always drawing from the two classes
// with the most remaining nodes; this matches every node whenever the
// largest class holds at most half of the total. Leftovers are paired with
// an already-used node from another class and flagged duplicate_use.
void pair_classes(std::vector<NodeClass>& classes, ScanRound* round) {
  auto largest_two = [&classes]() {
    int first = -1;
    int second = -1;
    for (int i = 0; i < static_cast<int>(classes.size()); ++i) {
      if (classes[i].todo.empty()) continue;
      if (first < 0 || classes[i].todo.size() > classes[first].todo.size()) {
        second = first;
        first = i;
      } else if (second < 0 ||
                 classes[i].todo.size() > classes[second].todo.size()) {
        second = i;
      }
    }
    return std::pair<int, int>(first, second);
  };

  for (;;) {
    auto [first, second] = largest_two();
    if (first < 0 || second < 0) break;
    NodeClass& a = classes[first];
    NodeClass& b = classes[second];
    round->pairs.push_back({a.todo.front(), b.todo.front(), false});
    a.used.push_back(a.todo.front());
    b.used.push_back(b.todo.front());
    a.todo.pop_front();
    b.todo.pop_front();
  }

  // At most one class still has nodes. Reuse partners from other classes.
  for (NodeClass& cls : classes) {
    if (cls.todo.empty()) continue;
    std::vector<std::string> partners;
    for (const NodeClass& other : classes) {
      if (other.class_id == cls.class_id) continue;
      partners.insert(partners.end(), other.used.begin(), other.used.end());
    }
    if (partners.empty()) break;  // nothing to pair across; nodes stay out
    std::sort(partners.begin(), partners.end());
    std::size_t next = 0;
    while (!cls.todo.empty()) {
      round->pairs.push_back({cls.todo.front(), partners[next], true});
      cls.todo.pop_front();
      next = (next + 1) % partners.size();
    }
  }
}

// Nodes grouped by their ancestor switch on `group_tier`, keyed by that
// switch, sub-grouped by the ancestor one tier below (the class whose
// members must not be paired together).
std::map<std::string, std::vector<NodeClass>> group_nodes(
    const FatTreeTopology& topology, int group_tier) {
  std::map<std::string, std::map<std::string, std::vector<std::string>>> tree;
  for (const std::string& node : topology.node_ids()) {
    const std::vector<std::string> chain = topology.ancestors(node);
    if (static_cast<int>(chain.size()) < group_tier) continue;
    const std::string& group = chain[group_tier - 1];
    const std::string cls = group_tier == 1 ? node : chain[group_tier - 2];
    tree[group][cls].push_back(node);
  }
  std::map<std::string, std::vector<NodeClass>> out;
  for (auto& [group, class_map] : tree) {
    std::vector<NodeClass>& classes = out[group];
    for (auto& [class_id, nodes] : class_map) {
      NodeClass c;
      c.class_id = class_id;
      std::sort(nodes.begin(), nodes.end());
      c.todo.assign(nodes.begin(), nodes.end());
      classes.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

ScanSchedule plan_quick_scan(const FatTreeTopology& topology) {
  ScanSchedule schedule;
  schedule.mode = ScanMode::kQuickScan;
  schedule.universe = topology.node_ids();

  for (int tier = 1; tier <= topology.tiers(); ++tier) {
    ScanRound round;
    round.hop_distance = 2 * tier;
    for (auto& [group, classes] : group_nodes(topology, tier)) {
      pair_classes(classes, &round);
    }
    schedule.rounds.push_back(std::move(round));
  }
  return schedule;
}

namespace {

std::string pair_text(const ScanPair& p) {
  return "(" + p.a + ", " + p.b + ")";
}

void check_round_membership(const ScanSchedule& schedule, ScanReport* report) {
  const std::set<std::string> universe(schedule.universe.begin(),
                                       schedule.universe.end());
  for (std::size_t r = 0; r < schedule.rounds.size(); ++r) {
    std::set<std::string> seen;
    for (const ScanPair& p : schedule.rounds[r].pairs) {
      if (p.a == p.b) {
        report->violations.push_back(
            {"self-pair", "round " + std::to_string(r + 1) + " pairs " + p.a +
                              " with itself"});
      }
      for (const std::string& id : {p.a, p.b}) {
        if (universe.find(id) == universe.end()) {
          report->violations.push_back(
              {"unknown-id", "round " + std::to_string(r + 1) +
                                 " references unknown id '" + id + "'"});
        }
      }
      if (p.duplicate_use) continue;  // excluded from uniqueness accounting
      for (const std::string& id : {p.a, p.b}) {
        if (!seen.insert(id).second) {
          report->violations.push_back(
              {"node-repeat", "round " + std::to_string(r + 1) +
                                  " uses node " + id + " more than once"});
        }
      }
    }
  }
}

}  // namespace

ScanReport verify_schedule(const ScanSchedule& schedule) {
  ScanReport report;
  const std::size_t n = schedule.universe.size();
  const std::size_t expected_rounds = n % 2 == 0 ? n - 1 : n;
  if (schedule.rounds.size() != expected_rounds) {
    report.violations.push_back(
        {"round-count", "expected " + std::to_string(expected_rounds) +
                            " rounds, found " +
                            std::to_string(schedule.rounds.size())});
  }
  check_round_membership(schedule, &report);

  std::map<std::pair<std::string, std::string>, std::size_t> first_seen;
  for (std::size_t r = 0; r < schedule.rounds.size(); ++r) {
    for (const ScanPair& p : schedule.rounds[r].pairs) {
      auto key = std::minmax(p.a, p.b);
      auto [it, inserted] = first_seen.emplace(key, r);
      if (!inserted) {
        report.violations.push_back(
            {"duplicate-pair", "pair " + pair_text(p) + " appears in round " +
                                   std::to_string(it->second + 1) +
                                   " and round " + std::to_string(r + 1)});
      }
    }
  }
  std::size_t missing = 0;
  for (std::size_t i = 0; i < schedule.universe.size(); ++i) {
    for (std::size_t j = i + 1; j < schedule.universe.size(); ++j) {
      auto key = std::minmax(schedule.universe[i], schedule.universe[j]);
      if (first_seen.find(key) == first_seen.end()) ++missing;
    }
  }
  if (missing > 0) {
    report.violations.push_back(
        {"missing-pairs",
         std::to_string(missing) + " of " +
             std::to_string(n * (n - 1) / 2) + " pairs never scheduled"});
  }
  return report;
}

ScanReport verify_schedule(const ScanSchedule& schedule,
                           const FatTreeTopology& topology) {
  ScanReport report;
  if (static_cast<int>(schedule.rounds.size()) != topology.tiers()) {
    report.violations.push_back(
        {"round-count", "expected " + std::to_string(topology.tiers()) +
                            " rounds (one per tier), found " +
                            std::to_string(schedule.rounds.size())});
  }
  check_round_membership(schedule, &report);

  for (std::size_t r = 0; r < schedule.rounds.size(); ++r) {
    const ScanRound& round = schedule.rounds[r];
    const int tier = static_cast<int>(r) + 1;
    if (round.hop_distance != 2 * tier) {
      report.violations.push_back(
          {"hop-label", "round " + std::to_string(r + 1) + " labeled " +
                            std::to_string(round.hop_distance) +
                            "-hop, expected " + std::to_string(2 * tier)});
    }
    std::set<std::string> present;
    for (const ScanPair& p : round.pairs) {
      const auto lca = topology.lca_tier(p.a, p.b);
      if (!lca.has_value() || *lca != tier) {
        report.violations.push_back(
            {"hop-distance",
             "round " + std::to_string(r + 1) + " pair " + pair_text(p) +
                 " is not at hop distance " + std::to_string(2 * tier)});
      }
      present.insert(p.a);
      present.insert(p.b);
    }
    // Every node that can be paired at this distance must appear.
    std::map<std::string, std::vector<NodeClass>> groups =
        group_nodes(topology, tier);
    for (const auto& [group, classes] : groups) {
      std::size_t total = 0;
      for (const NodeClass& c : classes) total += c.todo.size();
      for (const NodeClass& c : classes) {
        if (total - c.todo.size() == 0) continue;  // no cross partner exists
        for (const std::string& node : c.todo) {
          if (present.find(node) == present.end()) {
            report.violations.push_back(
                {"missing-node", "round " + std::to_string(r + 1) +
                                     " omits pairable node " + node});
          }
        }
      }
    }
  }
  return report;
}

}  // namespace fleetval
