// Copyright 2026 The stablematch Authors
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

#include <gtest/gtest.h>

#include <algorithm>

#include "stablematch/errors.hpp"
#include "stablematch/instances.hpp"
#include "stablematch/matching_solver.hpp"
#include "stablematch/pricing.hpp"
#include "stablematch/stability.hpp"
#include "test_util.hpp"

namespace stablematch {
namespace {

constexpr double kEps = 1e-9;

Allocation fig1(const char* pairs, const char* prices) {
  const Market m = fig1_market();
  return Allocation{parse_matching(m, pairs), parse_prices(m, prices)};
}

TEST(Fig1Goldens, ReconstructionMatchesTheOracle) {
  const Market m = fig1_market();
  EXPECT_NEAR(testing::brute_force_opt(m), 9.0, kEps);
  EXPECT_NEAR(brute_force_si(m, fig1("A-D,B-E", "7,11")), 4.0, kEps);
}

TEST(Fig1Goldens, WorkedExampleMetrics) {
  const Market m = fig1_market();
  const MetricReport r = evaluate_metrics(m, fig1("A-D,B-E", "7,11"));
  EXPECT_NEAR(r.opt, 9.0, kEps);
  EXPECT_NEAR(r.lambda, 2.0 / 3.0, kEps);
  EXPECT_NEAR(r.si, 4.0, kEps);
  EXPECT_NEAR(r.norm_si, 5.0 / 9.0, kEps);
  ASSERT_TRUE(r.kappa.has_value());
  EXPECT_NEAR(*r.kappa, 0.2, kEps);
}

TEST(Fig1Goldens, NonIndividuallyRationalPricesCostMore) {
  // Edward's loss adds to the Claire-Edward gap: 5 - (0 - 1) = 6.
  const Market m = fig1_market();
  const Allocation a = fig1("A-D,B-E", "7,9");
  EXPECT_NEAR(subset_instability(m, a), 6.0, kEps);
  EXPECT_NEAR(brute_force_si(m, a), 6.0, kEps);
}

TEST(OptimalityRatio, Fig1Cases) {
  const Market m = fig1_market();
  EXPECT_NEAR(optimality_ratio(m, parse_matching(m, "A-D,C-E")), 1.0, kEps);
  EXPECT_NEAR(optimality_ratio(m, parse_matching(m, "")), 0.0, kEps);
  EXPECT_NEAR(optimality_ratio(m, parse_matching(m, "B-E")), 2.0 / 9.0, kEps);
}

TEST(OptimalityRatio, ZeroMarketCountsAsOptimal) {
  const Market m = Market::from_surplus(Matrix(2, 2, 0.0));
  EXPECT_EQ(optimality_ratio(m, Matching(2, 2)), 1.0);
  EXPECT_EQ(stability_index(m, Allocation{Matching(2, 2), {0, 0}}), 1.0);
}

TEST(SubsetInstability, StableAllocationsHaveZero) {
  EXPECT_NEAR(subset_instability(fig1_market(), fig1("A-D,C-E", "6,12")), 0.0, kEps);
}

TEST(SubsetInstability, MatchesEnumerationOracle) {
  SeededSource rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const Market m = testing::random_small_market(rng, 4, 10, trial % 2 == 1);
    const Allocation a{testing::random_matching(rng, m), testing::random_prices(rng, m)};
    EXPECT_NEAR(subset_instability(m, a), brute_force_si(m, a), kEps);
  }
}

TEST(SubsetInstability, ZeroExactlyWhenStable) {
  SeededSource rng(42);
  int stable_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Market m = testing::random_small_market(rng, 3, 4, false);
    Allocation a{testing::random_matching(rng, m), testing::random_prices(rng, m)};
    if (trial % 3 == 0) a = shapley_shubik_prices(m);
    const bool stable = is_stable(m, a);
    stable_seen += stable;
    EXPECT_EQ(stable, subset_instability(m, a) <= kEps) << "trial " << trial;
  }
  EXPECT_GT(stable_seen, 50);
}

TEST(SubsetInstability, BoundedBelowByWelfareGap) {
  SeededSource rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const Market m = testing::random_small_market(rng, 4, 10, true);
    const Allocation a{testing::random_matching(rng, m), testing::random_prices(rng, m)};
    EXPECT_GE(subset_instability(m, a),
              optimal_value(m) - social_welfare(m, a.matching) - kEps);
  }
}

TEST(SubsetInstability, OracleRefusesLargeMarkets) {
  const Market m = Market::from_surplus(Matrix(5, 2, 1.0));
  EXPECT_THROW(brute_force_si(m, Allocation{Matching(5, 2), {0, 0}}), CapacityError);
}

TEST(Kappa, RequiresIndividualRationality) {
  EXPECT_THROW(kappa(fig1_market(), fig1("A-D,B-E", "7,9")), DomainError);
}

TEST(Kappa, UndefinedWithoutPositiveSurplus) {
  const Market m = Market::from_surplus(Matrix(1, 1, 0.0));
  EXPECT_FALSE(kappa(m, Allocation{Matching(1, 1), {0}}).has_value());
}

TEST(Kappa, StableMeansOne) {
  EXPECT_NEAR(*kappa(fig1_market(), fig1("A-D,C-E", "6,12")), 1.0, kEps);
}

TEST(Kappa, PairwiseValueAgreesWithSubmarketOracle) {
  SeededSource rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const Market m = testing::random_small_market(rng, 3, 8, false);
    const Allocation a = half_prices(m, testing::random_matching(rng, m));
    const auto pairwise = kappa(m, a);
    const auto oracle = kappa_submarket_oracle(m, a);
    ASSERT_EQ(pairwise.has_value(), oracle.has_value());
    if (pairwise) EXPECT_NEAR(*pairwise, std::min(*oracle, 1.0), kEps);
  }
}

TEST(MetricChain, KappaBelowIndexBelowRatioOnIrAllocations) {
  SeededSource rng(45);
  for (int trial = 0; trial < 300; ++trial) {
    const Market m = testing::random_small_market(rng, 4, 10, true);
    const Matching mu = testing::random_matching(rng, m);
    Allocation a{mu, testing::random_prices(rng, m)};
    a = clamp_prices_ir(m, a);
    const MetricReport r = evaluate_metrics(m, a);
    ASSERT_TRUE(r.individually_rational);
    EXPECT_LE(r.norm_si, r.lambda + kEps);
    if (r.kappa) EXPECT_LE(*r.kappa, r.norm_si + kEps);
  }
}

TEST(KappaZeroFamily, IndexEqualsRatioWhileKappaIsZero) {
  for (int k = 0; k <= 9; ++k) {
    const double k0 = 0.1 * k;
    const Market m = prop311_market(k0);
    const MetricReport r = evaluate_metrics(m, prop311_allocation(m));
    EXPECT_NEAR(r.lambda, k0, kEps);
    EXPECT_NEAR(r.norm_si, k0, kEps);
    ASSERT_TRUE(r.kappa.has_value());
    EXPECT_NEAR(*r.kappa, 0.0, kEps);
  }
}

}  // namespace
}  // namespace stablematch
