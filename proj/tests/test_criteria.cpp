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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fleetval/criteria.hpp"
#include "fleetval/error.hpp"
#include "test_util.hpp"

using fleetval::ConfigError;
using fleetval::Criteria;
using fleetval::Direction;
using fleetval::distance;
using fleetval::filter_defects;
using fleetval::get_centroid;
using fleetval::InvalidInputError;
using fleetval::learn_criteria;
using fleetval::LearnResult;
using fleetval::margin_ratio;
using fleetval::MetricSample;
using fleetval::repeatability;
using fleetval::similarity;
using fleetval::ValidationVerdict;

namespace {

MetricSample sample(const std::string& node, std::vector<double> values) {
  return MetricSample("throughput", node, Direction::kHigherIsBetter,
                      std::move(values));
}

// Cluster of near-identical samples around `center` plus outliers at
// center / 10.
std::vector<MetricSample> planted_dataset(std::mt19937_64& rng, double center,
                                          int healthy, int outliers) {
  std::vector<MetricSample> samples;
  for (int i = 0; i < healthy; ++i) {
    std::vector<double> values(20);
    for (double& v : values) {
      v = center * (1.0 + 0.005 * testutil::normal(rng));
    }
    samples.push_back(sample("good" + std::to_string(i), std::move(values)));
  }
  for (int i = 0; i < outliers; ++i) {
    std::vector<double> values(20);
    for (double& v : values) {
      v = center / 10.0 * (1.0 + 0.005 * testutil::normal(rng));
    }
    samples.push_back(sample("bad" + std::to_string(i), std::move(values)));
  }
  return samples;
}

}  // namespace

TEST_CASE("centroid of a singleton set is that sample") {
  const std::vector<MetricSample> set = {sample("n1", {5, 6})};
  CHECK(get_centroid(set) == 0);
}

TEST_CASE("centroid favors the repeated sample") {
  const std::vector<MetricSample> set = {sample("n1", {1, 1}),
                                         sample("n2", {1, 1}),
                                         sample("n3", {9, 9})};
  const std::size_t c = get_centroid(set);
  CHECK((c == 0 || c == 1));
}

TEST_CASE("centroid matches an exhaustive pairwise-sum oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MetricSample> set;
    for (int i = 0; i < 10; ++i) {
      set.push_back(testutil::random_sample(rng, "m", "n" + std::to_string(i)));
    }
    // Brute force over all members.
    double best_sum = -1.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < set.size(); ++j) {
        sum += similarity(set[i], set[j]);
      }
      if (sum > best_sum) {
        best_sum = sum;
        best = i;
      }
    }
    const std::size_t got = get_centroid(set);
    // Allow fp ties; the sums must match even if the index differs.
    double got_sum = 0.0;
    for (std::size_t j = 0; j < set.size(); ++j) {
      got_sum += similarity(set[got], set[j]);
    }
    CHECK(got_sum == doctest::Approx(best_sum).epsilon(1e-12));
    CHECK(got == best);
  }
}

TEST_CASE("centroid of an empty set is rejected") {
  CHECK_THROWS_AS(get_centroid({}), InvalidInputError);
}

TEST_CASE("learning on identical samples keeps everything") {
  std::vector<MetricSample> set;
  for (int i = 0; i < 5; ++i) {
    set.push_back(sample("n" + std::to_string(i), {7, 7, 7}));
  }
  const LearnResult result = learn_criteria(set, 0.95);
  CHECK(result.defect_indices.empty());
  CHECK(result.criteria.alpha == 0.95);
  CHECK(result.criteria.reference.values == std::vector<double>{7, 7, 7});
}

TEST_CASE("learning excludes a planted far outlier") {
  std::mt19937_64 rng(12);
  auto set = planted_dataset(rng, 100.0, 19, 1);
  const LearnResult result = learn_criteria(set, 0.95);
  REQUIRE(result.defect_node_ids == std::vector<std::string>{"bad0"});
  // Post-condition of the fixed-point loop: every retained sample clears
  // the threshold, every excluded one does not.
  for (std::size_t i = 0; i < set.size(); ++i) {
    const bool excluded =
        std::find(result.defect_indices.begin(), result.defect_indices.end(),
                  i) != result.defect_indices.end();
    const double s = similarity(result.criteria.reference, set[i]);
    if (excluded) {
      CHECK(s <= 0.95);
    } else {
      CHECK(s > 0.95);
    }
  }
  CHECK(result.iterations <= static_cast<int>(set.size()));
}

TEST_CASE("learning is deterministic under input permutation") {
  std::mt19937_64 rng(13);
  auto set = planted_dataset(rng, 50.0, 12, 2);
  const LearnResult base = learn_criteria(set, 0.95);
  auto shuffled = set;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const LearnResult permuted = learn_criteria(shuffled, 0.95);
  CHECK(base.criteria.reference.node_id == permuted.criteria.reference.node_id);
  CHECK(base.criteria.reference.values == permuted.criteria.reference.values);
  CHECK(base.defect_node_ids == permuted.defect_node_ids);
}

TEST_CASE("degenerate learning keeps only the centroid") {
  // Mutually dissimilar samples: everything but the centroid is excluded.
  std::vector<MetricSample> set = {sample("n1", {1, 1}), sample("n2", {40, 40}),
                                   sample("n3", {900, 900})};
  const LearnResult result = learn_criteria(set, 0.95);
  CHECK(result.defect_indices.size() == 2);
  CHECK(result.iterations <= 3);
}

TEST_CASE("filtering scores results against criteria") {
  Criteria criteria;
  criteria.metric_id = "throughput";
  criteria.direction = Direction::kHigherIsBetter;
  criteria.alpha = 0.95;
  criteria.reference = sample("ref", {2, 2});

  SUBCASE("result equal to the reference is healthy") {
    const auto verdicts = filter_defects({sample("n1", {2, 2})}, {criteria});
    REQUIRE(verdicts.size() == 1);
    CHECK_FALSE(verdicts[0].defect);
    CHECK(verdicts[0].scores.at("throughput") == 1.0);
  }

  SUBCASE("strictly better results are healthy regardless of margin") {
    const auto verdicts = filter_defects({sample("n1", {50, 60})}, {criteria});
    CHECK_FALSE(verdicts[0].defect);
    CHECK(verdicts[0].scores.at("throughput") == 1.0);
  }

  SUBCASE("regressed result is flagged with its score") {
    const auto verdicts = filter_defects({sample("n1", {1, 1})}, {criteria});
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0].defect);
    CHECK(verdicts[0].scores.at("throughput") == 0.5);
    CHECK(verdicts[0].violating_metrics ==
          std::vector<std::string>{"throughput"});
  }

  SUBCASE("missing criteria names the metric") {
    const MetricSample other("other_metric", "n1",
                             Direction::kHigherIsBetter, {1.0});
    CHECK_THROWS_WITH_AS(filter_defects({other}, {criteria}),
                         "no criteria for metric 'other_metric'", ConfigError);
  }
}

TEST_CASE("filtering flags nothing when results dominate the reference") {
  std::mt19937_64 rng(14);
  Criteria criteria;
  criteria.metric_id = "m";
  criteria.alpha = 0.95;
  criteria.reference = testutil::random_sample(rng, "m", "ref", 5, 20, 10, 20);
  std::vector<MetricSample> results;
  for (int i = 0; i < 10; ++i) {
    results.push_back(testutil::random_sample(
        rng, "m", "n" + std::to_string(i), 5, 20, 20, 30));
  }
  for (const ValidationVerdict& v : filter_defects(results, {criteria})) {
    CHECK_FALSE(v.defect);
  }
}

TEST_CASE("repeatability closed forms") {
  const MetricSample a1 = sample("n1", {4, 4});
  const MetricSample a2 = sample("n2", {4, 4});
  const MetricSample b = sample("n3", {5, 5});
  CHECK(repeatability({a1, a2}) == 1.0);
  const double s = similarity(a1, b);
  CHECK(repeatability({a1, a2, b}) ==
        doctest::Approx((1.0 + 2.0 * s) / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(repeatability({a1}), InvalidInputError);
}

TEST_CASE("repeatability matches the all-pairs oracle") {
  std::mt19937_64 rng(15);
  std::vector<MetricSample> set;
  for (int i = 0; i < 20; ++i) {
    set.push_back(testutil::random_sample(rng, "m", "n" + std::to_string(i)));
  }
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      sum += similarity(set[i], set[j]);
      ++pairs;
    }
  }
  CHECK(repeatability(set) == doctest::Approx(sum / pairs).epsilon(1e-12));
}

TEST_CASE("repeatability is scale invariant") {
  std::mt19937_64 rng(16);
  std::vector<MetricSample> set;
  for (int i = 0; i < 8; ++i) {
    set.push_back(testutil::random_sample(rng, "m", "n" + std::to_string(i)));
  }
  const double base = repeatability(set);
  for (MetricSample& s : set) {
    for (double& v : s.values) v *= 3.25;
  }
  CHECK(repeatability(set) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("margin ratio arithmetic and sentinel") {
  Criteria criteria;
  criteria.metric_id = "throughput";
  criteria.reference = sample("ref", {2, 2});

  SUBCASE("healthy identical to the reference yields infinity") {
    const double r =
        margin_ratio({sample("d", {1, 1})}, {sample("h", {2, 2})}, criteria);
    CHECK(std::isinf(r));
  }

  SUBCASE("plain ratio of the two extreme distances") {
    // d({1,1}, ref) = 0.5 and d({1.9, 2}, ref) = 0.05.
    const double r = margin_ratio({sample("d", {1, 1})},
                                  {sample("h", {1.9, 2.0})}, criteria);
    CHECK(r == doctest::Approx(10.0).epsilon(1e-9));
  }

  SUBCASE("empty sets are rejected") {
    CHECK_THROWS_AS(margin_ratio({}, {sample("h", {2, 2})}, criteria),
                    InvalidInputError);
  }
}

TEST_CASE("learned criteria separate the planted cluster") {
  std::mt19937_64 rng(17);
  auto set = planted_dataset(rng, 80.0, 15, 2);
  const LearnResult result = learn_criteria(set, 0.95);
  std::vector<MetricSample> defects;
  std::vector<MetricSample> healthy;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const bool excluded =
        std::find(result.defect_indices.begin(), result.defect_indices.end(),
                  i) != result.defect_indices.end();
    (excluded ? defects : healthy).push_back(set[i]);
  }
  REQUIRE_FALSE(defects.empty());
  CHECK(margin_ratio(defects, healthy, result.criteria) > 1.0);
}
