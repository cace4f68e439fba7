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

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fleetval {

struct SwitchInfo {
  std::string id;
  int tier = 1;        // 1 = top-of-rack, increasing upward
  std::string parent;  // empty at the top tier
};

/// Tree abstraction of a k-tier fat-tree: every node attaches to exactly
/// one ToR switch, every non-top switch has one parent on the tier above,
/// and the hop distance between two nodes is twice the tier of their
/// lowest common ancestor switch.
class FatTreeTopology {
 public:
  FatTreeTopology(std::vector<SwitchInfo> switches,
                  std::map<std::string, std::string> node_to_tor);

  int tiers() const { return tiers_; }
  const std::vector<SwitchInfo>& switches() const { return switches_; }
  const std::map<std::string, std::string>& node_to_tor() const {
    return node_to_tor_;
  }
  std::vector<std::string> node_ids() const;

  /// ToR-upward chain of switch ids for a node.
  std::vector<std::string> ancestors(const std::string& node_id) const;

  /// Tier of the lowest common ancestor switch, or nullopt when the two
  /// nodes share no ancestor (disjoint trees). Hop distance is 2x this.
  std::optional<int> lca_tier(const std::string& n1,
                              const std::string& n2) const;

 private:
  std::vector<SwitchInfo> switches_;
  std::map<std::string, std::string> node_to_tor_;
  std::map<std::string, std::size_t> switch_index_;
  int tiers_ = 0;
};

}  // namespace fleetval
