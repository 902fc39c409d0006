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

#include <cmath>
#include <cstdlib>

#include "stablematch/errors.hpp"
#include "stablematch/evaluation.hpp"
#include "stablematch/instances.hpp"
#include "stablematch/stability.hpp"

namespace stablematch {
namespace {

constexpr double kEps = 1e-9;

std::vector<WeightedAllocation> coin() {
  const Market m = fig1_market();
  return {{Allocation{parse_matching(m, "A-D,C-E"), {6, 12}}, 0.5},
          {Allocation{parse_matching(m, "A-D,B-E"), {7, 11}}, 0.5}};
}

class ScopedThreads {
 public:
  explicit ScopedThreads(const char* value) {
    const char* old = std::getenv("STABLEMATCH_THREADS");
    if (old) old_ = old;
    setenv("STABLEMATCH_THREADS", value, 1);
  }
  ~ScopedThreads() {
    if (old_.empty()) {
      unsetenv("STABLEMATCH_THREADS");
    } else {
      setenv("STABLEMATCH_THREADS", old_.c_str(), 1);
    }
  }

 private:
  std::string old_;
};

TEST(Distribution, CoinOverFig1Allocations) {
  const FullEvaluation e = evaluate_distribution(fig1_market(), coin());
  EXPECT_NEAR(e.at(Metric::kLambda, Mode::kAnte).value, 5.0 / 6.0, kEps);
  EXPECT_NEAR(e.at(Metric::kLambda, Mode::kAvg).value, 5.0 / 6.0, kEps);
  EXPECT_NEAR(e.at(Metric::kLambda, Mode::kPost).value, 2.0 / 3.0, kEps);
  EXPECT_NEAR(e.at(Metric::kNormSi, Mode::kAnte).value, 7.0 / 9.0, kEps);
  EXPECT_NEAR(e.at(Metric::kNormSi, Mode::kAvg).value, 7.0 / 9.0, kEps);
  EXPECT_GE(e.at(Metric::kNormSi, Mode::kAvg).value,
            e.at(Metric::kNormSi, Mode::kAnte).value - kEps);
}

TEST(Distribution, CoinAverageInstabilityMatchesOracle) {
  const Market m = fig1_market();
  const FullEvaluation e = evaluate_distribution(m, coin());
  const double si = avg_subset_instability(m, e.expected_u, e.expected_v);
  EXPECT_NEAR(si, brute_force_si(m, e.expected_u, e.expected_v), kEps);
  EXPECT_NEAR(si, 2.0, kEps);
}

TEST(Distribution, PointMassOnStableAllocationHasZeroAverageInstability) {
  const Market m = fig1_market();
  const std::vector<WeightedAllocation> point{
      {Allocation{parse_matching(m, "A-D,C-E"), {6, 12}}, 1.0}};
  const FullEvaluation e = evaluate_distribution(m, point);
  EXPECT_NEAR(avg_subset_instability(m, e.expected_u, e.expected_v), 0.0, kEps);
}

TEST(Distribution, OrderOfAtomsDoesNotMatter) {
  auto atoms = coin();
  const FullEvaluation a = evaluate_distribution(fig1_market(), atoms);
  std::swap(atoms[0], atoms[1]);
  const FullEvaluation b = evaluate_distribution(fig1_market(), atoms);
  for (Metric me : {Metric::kLambda, Metric::kNormSi, Metric::kKappa}) {
    for (Mode mo : {Mode::kPost, Mode::kAnte, Mode::kAvg}) {
      EXPECT_NEAR(a.at(me, mo).value, b.at(me, mo).value, 1e-12);
    }
  }
}

TEST(Distribution, RejectsBadProbabilities) {
  auto atoms = coin();
  atoms[0].probability = 0.7;
  EXPECT_THROW(evaluate_distribution(fig1_market(), atoms), DomainError);
  EXPECT_THROW(evaluate_distribution(fig1_market(), {}), DomainError);
}

TEST(Evaluate, DeterministicAlgorithmCollapsesModes) {
  const FullEvaluation e = evaluate_all(kvv_pair()[0], greedy_half(), Method::kExact);
  EXPECT_EQ(e.support_size, 1u);
  for (Metric me : {Metric::kLambda, Metric::kNormSi, Metric::kKappa}) {
    EXPECT_EQ(e.at(me, Mode::kPost).value, e.at(me, Mode::kAnte).value);
    EXPECT_NEAR(e.at(me, Mode::kAnte).value, e.at(me, Mode::kAvg).value, kEps);
  }
}

TEST(Evaluate, AcceptingFirstEdgeCostsHalfOfAverageStability) {
  const FullEvaluation e = evaluate_all(fig6_pair()[0], greedy_half(), Method::kExact);
  EXPECT_GE(avg_subset_instability(fig6_pair()[0].market, e.expected_u, e.expected_v),
            0.5 - kEps);
}

TEST(Evaluate, SingleCellReport) {
  const EvalReport r = evaluate(kvv_pair()[0], greedy_half(),
                                EvalConfig{Mode::kPost, Metric::kKappa, Method::kExact, 0, 0});
  EXPECT_NEAR(r.value, 0.5, kEps);
  EXPECT_FALSE(r.estimated);
  EXPECT_EQ(r.method, Method::kExact);
}

TEST(OrderStatistics, ClosedFormsForSmallMarkets) {
  EXPECT_NEAR(order_statistic_exp_mean(1, 1), std::exp(1.0) - 1.0, 1e-14);
  EXPECT_NEAR(order_statistic_exp_mean(1, 2), 2.0 * (std::exp(1.0) - 2.0), 1e-14);
  EXPECT_NEAR(order_statistic_exp_mean(2, 2), 2.0, 1e-14);
  EXPECT_THROW(order_statistic_exp_mean(0, 2), DomainError);
}

TEST(Enumeration, RankingOnEqualWeightsUsesRankOrders) {
  const Support s = enumerate_outcomes(triangular(4), ranking());
  EXPECT_TRUE(s.rank_permutations);
  EXPECT_EQ(s.atoms.size(), 24u);
}

TEST(Enumeration, RankingOnUnequalWeightsUsesTheGrid) {
  const OnlineInstance inst = vertex_instance(Market::from_surplus(Matrix{{1, 2}, {1, 0}}));
  const Support s = enumerate_outcomes(inst, ranking());
  EXPECT_TRUE(s.discretized);
  EXPECT_EQ(s.atoms.size(), 32u * 32u);
  const FullEvaluation e = evaluate_all(inst, ranking(), Method::kExact);
  EXPECT_TRUE(e.at(Metric::kKappa, Mode::kAvg).estimated);
}

TEST(Enumeration, TieFlippingEnumeratesEveryBranch) {
  const Support s = enumerate_outcomes(adversary_begin(10.0, 3), greedy_free_disposal(true));
  EXPECT_EQ(s.atoms.size(), 8u);
  double total = 0.0;
  for (const auto& a : s.atoms) total += a.probability;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Enumeration, ExplosionIsCapacityError) {
  EXPECT_THROW(enumerate_outcomes(adversary_begin(10.0, 16), greedy_free_disposal(true)),
               CapacityError);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
  FullEvaluation one;
  FullEvaluation many;
  {
    ScopedThreads t("1");
    one = evaluate_all(triangular(5), ranking(), Method::kMonteCarlo, 3000, 17);
  }
  {
    ScopedThreads t("4");
    many = evaluate_all(triangular(5), ranking(), Method::kMonteCarlo, 3000, 17);
  }
  for (Metric me : {Metric::kLambda, Metric::kNormSi, Metric::kKappa}) {
    for (Mode mo : {Mode::kPost, Mode::kAnte, Mode::kAvg}) {
      EXPECT_EQ(one.at(me, mo).value, many.at(me, mo).value);
    }
  }
  EXPECT_EQ(one.expected_u, many.expected_u);
}

TEST(MonteCarlo, QuadruplingTrialsHalvesStandardError) {
  const auto small = evaluate_all(triangular(5), ranking(), Method::kMonteCarlo, 4000, 5);
  const auto large = evaluate_all(triangular(5), ranking(), Method::kMonteCarlo, 16000, 6);
  const double ratio = *large.at(Metric::kLambda, Mode::kAnte).std_error /
                       *small.at(Metric::kLambda, Mode::kAnte).std_error;
  EXPECT_GT(ratio, 0.4);
  EXPECT_LT(ratio, 0.6);
}

TEST(MonteCarlo, AgreesWithExactEnumeration) {
  const OnlineInstance inst = triangular(4);
  const auto exact = evaluate_all(inst, ranking(), Method::kExact);
  const auto mc = evaluate_all(inst, ranking(), Method::kMonteCarlo, 40000, 8);
  for (Metric me : {Metric::kLambda, Metric::kKappa}) {
    const Cell& c = mc.at(me, Mode::kAvg);
    EXPECT_NEAR(c.value, exact.at(me, Mode::kAvg).value, 3.0 * *c.std_error + 1e-12);
  }
  EXPECT_TRUE(mc.at(Metric::kKappa, Mode::kPost).estimated);
}

TEST(MonteCarlo, RequiresTrials) {
  EXPECT_THROW(evaluate_all(triangular(3), ranking(), Method::kMonteCarlo, 0, 0), ConfigError);
}

TEST(Audit, StableOutputGivesAllOnes) {
  const OnlineInstance inst = vertex_instance(Market::from_surplus(Matrix{{1}}));
  const AuditReport r = inequality_audit(inst, greedy_half());
  EXPECT_TRUE(r.ok());
  for (const auto& row : r.evaluation.cells) {
    for (const Cell& c : row) EXPECT_NEAR(c.value, 1.0, kEps);
  }
}

TEST(Audit, GreedyHalfOnTriangularFive) {
  const AuditReport r = inequality_audit(triangular(5), greedy_half());
  EXPECT_TRUE(r.ok()) << (r.violations.empty() ? "" : r.violations.front());
}

TEST(Audit, RankingChainsHold) {
  for (std::size_t n : {3, 4, 5}) {
    const AuditReport r = inequality_audit(triangular(n), ranking());
    EXPECT_TRUE(r.ok()) << (r.violations.empty() ? "" : r.violations.front());
  }
}

TEST(Audit, CoinChainsHold) {
  const AuditReport r = audit_evaluation(evaluate_distribution(fig1_market(), coin()));
  EXPECT_TRUE(r.ok());
}

TEST(Audit, ReportsWitnessForBrokenChain) {
  FullEvaluation e = evaluate_distribution(fig1_market(), coin());
  e.at(Metric::kKappa, Mode::kPost).value = 0.99;
  const AuditReport r = audit_evaluation(e);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations.front().find("kappa^post"), std::string::npos);
}

TEST(Parsing, ModesMetricsMethods) {
  EXPECT_EQ(parse_mode("ex-ante"), Mode::kAnte);
  EXPECT_EQ(parse_metric("norm_si"), Metric::kNormSi);
  EXPECT_EQ(parse_method("monte_carlo"), Method::kMonteCarlo);
  EXPECT_FALSE(parse_metric("gini").has_value());
}

}  // namespace
}  // namespace stablematch
