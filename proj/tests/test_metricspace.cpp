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
#include <random>

#include "fleetval/error.hpp"
#include "fleetval/metric_sample.hpp"
#include "test_util.hpp"

using fleetval::Direction;
using fleetval::distance;
using fleetval::EmpiricalCdf;
using fleetval::empirical_cdf;
using fleetval::InvalidInputError;
using fleetval::MetricSample;
using fleetval::one_sided_distance;
using fleetval::similarity;

namespace {

MetricSample higher(const std::string& node, std::vector<double> values) {
  return MetricSample("throughput", node, Direction::kHigherIsBetter,
                      std::move(values));
}

MetricSample lower(const std::string& node, std::vector<double> values) {
  return MetricSample("latency", node, Direction::kLowerIsBetter,
                      std::move(values));
}

}  // namespace

TEST_CASE("empirical cdf steps at distinct sorted values") {
  const EmpiricalCdf cdf = empirical_cdf(higher("n1", {2, 1, 2, 1}));
  REQUIRE(cdf.support() == std::vector<double>{1, 2});
  REQUIRE(cdf.heights() == std::vector<double>{0.5, 1.0});
  CHECK(cdf(0.5) == 0.0);
  CHECK(cdf(1.0) == 0.5);  // right-continuous
  CHECK(cdf(1.5) == 0.5);
  CHECK(cdf(2.0) == 1.0);
  CHECK(cdf(9.0) == 1.0);
}

TEST_CASE("empirical cdf of a singleton") {
  const EmpiricalCdf cdf = empirical_cdf(higher("n1", {5}));
  REQUIRE(cdf.support() == std::vector<double>{5});
  REQUIRE(cdf.heights() == std::vector<double>{1.0});
}

TEST_CASE("empirical cdf ignores input order") {
  std::mt19937_64 rng(7);
  std::vector<double> values = {1, 2, 3, 4};
  const EmpiricalCdf base = empirical_cdf(higher("n1", values));
  std::shuffle(values.begin(), values.end(), rng);
  const EmpiricalCdf shuffled = empirical_cdf(higher("n1", values));
  CHECK(base.support() == shuffled.support());
  CHECK(base.heights() == shuffled.heights());
}

TEST_CASE("invalid samples are rejected") {
  MetricSample empty;
  empty.metric_id = "m";
  CHECK_THROWS_AS(empirical_cdf(empty), InvalidInputError);
  CHECK_THROWS_AS(higher("n1", {1.0, -2.0}), InvalidInputError);
  CHECK_THROWS_AS(higher("n1", {std::nan("")}), InvalidInputError);
}

TEST_CASE("distance of identical samples is zero") {
  const MetricSample s = higher("n1", {3, 1, 4, 1, 5});
  CHECK(distance(s, s) == 0.0);
  CHECK(similarity(s, s) == 1.0);
}

TEST_CASE("distance between separated two-point samples") {
  // CDFs disagree only on [1, 2), where the integrand is 1; x_max = 2.
  CHECK(distance(higher("a", {1, 1}), higher("b", {2, 2})) == 0.5);
  CHECK(similarity(higher("a", {1, 1}), higher("b", {2, 2})) == 0.5);
}

TEST_CASE("distance approaches one for samples on separated scales") {
  const double eps = 1e-9;
  const double d = distance(higher("a", {eps, eps}), higher("b", {10, 10}));
  CHECK(d == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d <= 1.0);
}

TEST_CASE("all-zero samples") {
  CHECK(distance(higher("a", {0, 0}), higher("b", {0})) == 0.0);
  CHECK(distance(higher("a", {0, 0}), higher("b", {10})) == 1.0);
}

TEST_CASE("metric mismatch is rejected") {
  CHECK_THROWS_AS(distance(higher("a", {1}), lower("b", {1})),
                  InvalidInputError);
  CHECK_THROWS_AS(one_sided_distance(higher("a", {1}), lower("b", {1})),
                  InvalidInputError);
}

TEST_CASE("one-sided distance scores only the bad side") {
  // Observed dominates the criteria: nothing to penalize.
  CHECK(one_sided_distance(higher("a", {5, 6}), higher("c", {1, 2})) == 0.0);
  const MetricSample s = higher("a", {2, 3});
  CHECK(one_sided_distance(s, s) == 0.0);
  // All deviation mass on the bad side: equals the two-sided distance.
  CHECK(one_sided_distance(higher("a", {1, 1}), higher("c", {2, 2})) == 0.5);
}

TEST_CASE("one-sided distance mirrors for lower-is-better metrics") {
  CHECK(one_sided_distance(lower("a", {2, 2}), lower("c", {1, 1})) == 0.5);
  CHECK(one_sided_distance(lower("a", {1, 1}), lower("c", {2, 2})) == 0.0);
}

TEST_CASE("distance laws over random sample pairs") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const MetricSample a = testutil::random_sample(rng, "m", "na");
    const MetricSample b = testutil::random_sample(rng, "m", "nb");
    const double d_ab = distance(a, b);
    const double d_ba = distance(b, a);
    CHECK(d_ab >= 0.0);
    CHECK(d_ab <= 1.0);
    CHECK(d_ab == d_ba);  // same merged-segment walk either way
    CHECK(distance(a, a) == 0.0);

    // Deviations split by sign between the two one-sided integrals.
    const double sum = one_sided_distance(a, b) + one_sided_distance(b, a);
    CHECK(sum == doctest::Approx(d_ab).epsilon(1e-9));
    CHECK(one_sided_distance(a, b) <= d_ab + 1e-15);
  }
}

TEST_CASE("distance is invariant to permutation and duplication") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const MetricSample a = testutil::random_sample(rng, "m", "na");
    const MetricSample b = testutil::random_sample(rng, "m", "nb");
    const double base = distance(a, b);

    MetricSample shuffled = a;
    std::shuffle(shuffled.values.begin(), shuffled.values.end(), rng);
    CHECK(distance(shuffled, b) == base);

    MetricSample doubled = a;
    doubled.values.insert(doubled.values.end(), a.values.begin(),
                          a.values.end());
    CHECK(distance(doubled, b) == base);
  }
}

TEST_CASE("distance is invariant to common positive scaling") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    MetricSample a = testutil::random_sample(rng, "m", "na");
    MetricSample b = testutil::random_sample(rng, "m", "nb");
    const double base = distance(a, b);
    for (const double factor : {2.0, 1.37}) {
      MetricSample sa = a;
      MetricSample sb = b;
      for (double& v : sa.values) v *= factor;
      for (double& v : sb.values) v *= factor;
      CHECK(distance(sa, sb) == doctest::Approx(base).epsilon(1e-9));
    }
  }
}

TEST_CASE("segment sum matches the refined-grid integration oracle") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const MetricSample a = testutil::random_sample(rng, "m", "na", 1, 30);
    const MetricSample b = testutil::random_sample(rng, "m", "nb", 1, 30);
    const double exact = distance(a, b);
    const double oracle = testutil::grid_distance_oracle(a, b, 100000);
    CHECK(exact == doctest::Approx(oracle).epsilon(1e-9));
  }
}
