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

#include "fleetval/topology.hpp"

#include <algorithm>

#include "fleetval/error.hpp"

namespace fleetval {

FatTreeTopology::FatTreeTopology(std::vector<SwitchInfo> switches,
                                 std::map<std::string, std::string> node_to_tor)
    : switches_(std::move(switches)), node_to_tor_(std::move(node_to_tor)) {
  if (switches_.empty()) {
    throw InvalidInputError("topology has no switches");
  }
  for (std::size_t i = 0; i < switches_.size(); ++i) {
    const SwitchInfo& s = switches_[i];
    if (s.tier < 1) {
      throw InvalidInputError("switch '" + s.id + "' has tier < 1");
    }
    if (!switch_index_.emplace(s.id, i).second) {
      throw InvalidInputError("duplicate switch id '" + s.id + "'");
    }
    tiers_ = std::max(tiers_, s.tier);
  }
  for (const SwitchInfo& s : switches_) {
    if (s.tier == tiers_) {
      if (!s.parent.empty()) {
        throw InvalidInputError("top-tier switch '" + s.id +
                                "' must not have a parent");
      }
      continue;
    }
    auto it = switch_index_.find(s.parent);
    if (it == switch_index_.end()) {
      throw InvalidInputError("switch '" + s.id + "' names missing parent '" +
                              s.parent + "'");
    }
    if (switches_[it->second].tier != s.tier + 1) {
      throw InvalidInputError("switch '" + s.id + "' parent '" + s.parent +
                              "' is not on the tier above");
    }
  }
  if (node_to_tor_.empty()) {
    throw InvalidInputError("topology has no nodes");
  }
  for (const auto& [node, tor] : node_to_tor_) {
    auto it = switch_index_.find(tor);
    if (it == switch_index_.end() || switches_[it->second].tier != 1) {
      throw InvalidInputError("node '" + node +
                              "' attaches to missing or non-ToR switch '" +
                              tor + "'");
    }
  }
}

std::vector<std::string> FatTreeTopology::node_ids() const {
  std::vector<std::string> ids;
  ids.reserve(node_to_tor_.size());
  for (const auto& [node, tor] : node_to_tor_) ids.push_back(node);
  return ids;
}

std::vector<std::string> FatTreeTopology::ancestors(
    const std::string& node_id) const {
  auto it = node_to_tor_.find(node_id);
  if (it == node_to_tor_.end()) {
    throw InvalidInputError("unknown node '" + node_id + "'");
  }
  std::vector<std::string> chain;
  std::string current = it->second;
  while (!current.empty()) {
    chain.push_back(current);
    current = switches_[switch_index_.at(current)].parent;
  }
  return chain;
}

std::optional<int> FatTreeTopology::lca_tier(const std::string& n1,
                                             const std::string& n2) const {
  const std::vector<std::string> a1 = ancestors(n1);
  const std::vector<std::string> a2 = ancestors(n2);
  for (const std::string& s : a1) {
    if (std::find(a2.begin(), a2.end(), s) != a2.end()) {
      return switches_[switch_index_.at(s)].tier;
    }
  }
  return std::nullopt;
}

}  // namespace fleetval
