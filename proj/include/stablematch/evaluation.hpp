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

#ifndef STABLEMATCH_EVALUATION_HPP_
#define STABLEMATCH_EVALUATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablematch/market.hpp"
#include "stablematch/online.hpp"

namespace stablematch {

enum class Mode { kPost, kAnte, kAvg };
enum class Metric { kLambda, kNormSi, kKappa };
enum class Method { kExact, kMonteCarlo };

std::string_view to_string(Mode mode);
std::string_view to_string(Metric metric);
std::string_view to_string(Method method);
std::optional<Mode> parse_mode(std::string_view text);
std::optional<Metric> parse_metric(std::string_view text);
std::optional<Method> parse_method(std::string_view text);

inline constexpr std::size_t kMaxSupport = 50000;
inline constexpr std::size_t kMonteCarloBlock = 256;
inline constexpr std::size_t kMonteCarloBatches = 20;

struct EvalConfig {
  Mode mode = Mode::kAnte;
  Metric metric = Metric::kLambda;
  Method method = Method::kMonteCarlo;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
};

struct WeightedAllocation {
  Allocation allocation;
  double probability = 0.0;
};

// Outcome distribution of an online algorithm on one instance.
struct Support {
  std::vector<WeightedAllocation> atoms;
  // Continuous draws were replaced by grid midpoints.
  bool discretized = false;
  // Atoms are seller-rank permutations carrying conditional expected prices;
  // per-outcome metrics other than lambda are then approximations.
  bool rank_permutations = false;
};

// Enumerates every outcome of alg on instance. Throws CapacityError when the
// support would exceed max_atoms.
Support enumerate_outcomes(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                           std::size_t max_atoms = kMaxSupport);

struct Cell {
  double value = 0.0;
  std::optional<double> std_error;
  bool estimated = false;
};

struct FullEvaluation {
  std::array<std::array<Cell, 3>, 3> cells{};  // [metric][mode]
  Method method = Method::kExact;
  std::size_t support_size = 0;  // exact only
  std::size_t trials = 0;        // Monte Carlo only
  std::uint64_t seed = 0;
  double opt = 0.0;
  std::vector<double> expected_u;
  std::vector<double> expected_v;
  bool non_ir_outcomes = false;
  bool discretized = false;

  const Cell& at(Metric metric, Mode mode) const {
    return cells[static_cast<std::size_t>(metric)][static_cast<std::size_t>(mode)];
  }
  Cell& at(Metric metric, Mode mode) {
    return cells[static_cast<std::size_t>(metric)][static_cast<std::size_t>(mode)];
  }
};

// Metrics of an explicit distribution. Probabilities must be non-negative and
// sum to 1.
FullEvaluation evaluate_distribution(const Market& market,
                                     std::span<const WeightedAllocation> atoms);

FullEvaluation evaluate_all(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                            Method method, std::size_t trials = 10000,
                            std::uint64_t seed = 0);

struct EvalReport {
  Metric metric = Metric::kLambda;
  Mode mode = Mode::kAnte;
  double value = 0.0;
  std::optional<double> std_error;
  bool estimated = false;
  Method method = Method::kExact;
  std::size_t support_size = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> expected_u;
  std::vector<double> expected_v;
  bool non_ir_outcomes = false;
};

EvalReport evaluate(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                    const EvalConfig& config);

// Subset instability of an expected-utility profile.
double avg_subset_instability(const Market& market, std::span<const double> expected_u,
                              std::span<const double> expected_v);

struct AuditReport {
  FullEvaluation evaluation;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Exact evaluation of all nine cells plus the metric and mode chains.
AuditReport inequality_audit(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                             double tol = 1e-9);
AuditReport audit_evaluation(const FullEvaluation& evaluation, double tol = 1e-9);

// E[exp(Y)] for the k-th smallest (1-based) of m independent uniforms.
double order_statistic_exp_mean(std::size_t k, std::size_t m);

}  // namespace stablematch

#endif  // STABLEMATCH_EVALUATION_HPP_
