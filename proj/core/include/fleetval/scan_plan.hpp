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

#include "fleetval/topology.hpp"

namespace fleetval {

struct ScanPair {
  std::string a;
  std::string b;
  /// Measurement-only pair that reuses an already-paired endpoint to give
  /// an otherwise unmatched node coverage; excluded from uniqueness
  /// accounting.
  bool duplicate_use = false;
};

struct ScanRound {
  int hop_distance = 0;  // quick scan only; 0 for full-scan rounds
  std::vector<ScanPair> pairs;
};

enum class ScanMode { kFullScan, kQuickScan };

std::string to_string(ScanMode mode);
ScanMode scan_mode_from_string(const std::string& text);

struct ScanSchedule {
  ScanMode mode = ScanMode::kFullScan;
  std::vector<std::string> universe;  // every NIC/node the plan covers
  std::vector<ScanRound> rounds;
};

/// Round-robin circle method: for an even count N the N(N-1)/2 unordered
/// pairs are arranged into N-1 rounds of disjoint pairs. An odd count is
/// padded with a bye; its pairs are omitted, giving N rounds of
/// (N-1)/2 pairs.
ScanSchedule plan_full_scan(const std::vector<std::string>& nic_ids);

/// Topology-aware quick scan: one round per tier; round h pairs nodes at
/// hop distance exactly 2h (lowest common ancestor on tier h), with every
/// pairable node appearing exactly once per round. Unmatched leftovers are
/// paired with an already-used neighbor and flagged duplicate_use.
ScanSchedule plan_quick_scan(const FatTreeTopology& topology);

struct ScanViolation {
  std::string kind;  // e.g. "duplicate-pair", "node-repeat", "hop-distance"
  std::string message;
};

struct ScanReport {
  std::vector<ScanViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks a full-scan schedule: round count, per-round disjointness, and
/// exactly-once coverage of all pairs over the universe.
ScanReport verify_schedule(const ScanSchedule& schedule);

/// Checks a quick-scan schedule against its topology: round count equals
/// the tier count, every pair sits at its round's hop distance, nodes are
/// unique per round, and every pairable node is present.
ScanReport verify_schedule(const ScanSchedule& schedule,
                           const FatTreeTopology& topology);

}  // namespace fleetval
