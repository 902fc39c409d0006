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

#include "stablematch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "stablematch/errors.hpp"
#include "stablematch/matching_solver.hpp"
#include "stablematch/parallel.hpp"
#include "stablematch/stability.hpp"

namespace stablematch {
namespace {

constexpr std::size_t kLambda = 0;
constexpr std::size_t kNormSi = 1;
constexpr std::size_t kKappa = 2;
constexpr std::size_t kPost = 0;
constexpr std::size_t kAnte = 1;
constexpr std::size_t kAvg = 2;

struct OutcomeMetrics {
  std::array<double, 3> values{};
  bool individually_rational = true;
  UtilityProfile util;
};

double ratio_or_one(double numerator, double opt) {
  return opt > kTolerance ? numerator / opt : 1.0;
}

// Kappa extended to non-IR profiles by the same formula, capped at 1 and
// taken as 1 when no pair has positive surplus.
double extended_kappa(const Market& market, std::span<const double> u,
                      std::span<const double> v) {
  const auto raw = kappa_raw(market, u, v);
  return raw ? std::min(*raw, 1.0) : 1.0;
}

OutcomeMetrics outcome_metrics(const Market& market, double opt, const Allocation& alloc) {
  OutcomeMetrics out;
  out.util = utilities(market, alloc);
  out.values[kLambda] = ratio_or_one(social_welfare(market, alloc.matching), opt);
  out.values[kNormSi] =
      opt > kTolerance ? 1.0 - subset_instability(market, out.util.u, out.util.v) / opt : 1.0;
  out.values[kKappa] = extended_kappa(market, out.util.u, out.util.v);
  for (double x : out.util.u) out.individually_rational &= x >= -kTolerance;
  for (double x : out.util.v) out.individually_rational &= x >= -kTolerance;
  return out;
}

// Metric triple of an expected-utility profile.
std::array<double, 3> average_metrics(const Market& market, double opt,
                                      std::span<const double> u, std::span<const double> v) {
  std::array<double, 3> out{};
  const double welfare = std::accumulate(u.begin(), u.end(), 0.0) +
                         std::accumulate(v.begin(), v.end(), 0.0);
  out[kLambda] = ratio_or_one(welfare, opt);
  out[kNormSi] = opt > kTolerance ? 1.0 - subset_instability(market, u, v) / opt : 1.0;
  out[kKappa] = extended_kappa(market, u, v);
  return out;
}

bool equal_positive_weights(const Market& market) {
  double weight = 0.0;
  for (std::size_t i = 0; i < market.num_buyers(); ++i) {
    for (std::size_t j = 0; j < market.num_sellers(); ++j) {
      const double a = market.surplus(i, j);
      if (a <= 0.0) continue;
      if (weight == 0.0) {
        weight = a;
      } else if (std::abs(a - weight) > kTolerance) {
        return false;
      }
    }
  }
  return true;
}

// Forwards to an enumerating source and records whether a continuous draw
// was made.
class TrackingSource final : public RandomSource {
 public:
  explicit TrackingSource(EnumeratingSource& inner) : inner_(inner) {}
  double uniform01() override {
    used_uniform_ = true;
    return inner_.uniform01();
  }
  std::size_t choice(std::size_t count) override { return inner_.choice(count); }
  bool used_uniform() const { return used_uniform_; }

 private:
  EnumeratingSource& inner_;
  bool used_uniform_ = false;
};

std::size_t factorial_capped(std::size_t m, std::size_t cap) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= m; ++k) {
    if (f > cap / k) return cap + 1;
    f *= k;
  }
  return f;
}

Support rank_permutation_support(const OnlineInstance& instance, const OnlineAlgorithm& alg) {
  const std::size_t m = instance.market.num_sellers();
  std::vector<double> level(m);
  for (std::size_t k = 0; k < m; ++k) {
    level[k] = std::log(order_statistic_exp_mean(k + 1, m));
  }
  std::vector<std::size_t> rank(m);
  std::iota(rank.begin(), rank.end(), 0);
  const double p = 1.0 / static_cast<double>(factorial_capped(m, kMaxSupport));
  Support support;
  support.rank_permutations = true;
  do {
    std::vector<double> y(m);
    for (std::size_t j = 0; j < m; ++j) y[j] = level[rank[j]];
    ScriptedSource source(std::move(y));
    support.atoms.push_back({simulate_traced(instance, alg, source).allocation, p});
  } while (std::next_permutation(rank.begin(), rank.end()));
  return support;
}

// Accumulated Monte Carlo statistics for a contiguous range of trials.
struct BlockStats {
  std::array<double, 3> sum{};
  std::array<double, 3> sum_sq{};
  std::array<double, 3> min{};
  std::vector<double> sum_u;
  std::vector<double> sum_v;
  // batch index -> (trial count, sum u, sum v)
  std::map<std::size_t, std::tuple<std::size_t, std::vector<double>, std::vector<double>>>
      batches;
  bool non_ir = false;
};

void add_into(std::vector<double>& acc, const std::vector<double>& x) {
  for (std::size_t k = 0; k < x.size(); ++k) acc[k] += x[k];
}

double sample_std_error(double sum, double sum_sq, std::size_t n) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  const double var =
      std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1));
  return std::sqrt(var / static_cast<double>(n));
}

FullEvaluation monte_carlo(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                           std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ConfigError("Monte Carlo evaluation needs at least one trial");
  const Market& market = instance.market;
  const double opt = optimal_value(market);
  const std::size_t n = market.num_buyers();
  const std::size_t m = market.num_sellers();
  const std::size_t num_blocks = (trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
  const std::size_t num_batches = std::min(kMonteCarloBatches, trials);
  std::vector<BlockStats> blocks(num_blocks);

  parallel_for(num_blocks, [&](std::size_t b) {
    BlockStats& s = blocks[b];
    s.min.fill(std::numeric_limits<double>::infinity());
    s.sum_u.assign(n, 0.0);
    s.sum_v.assign(m, 0.0);
    const std::size_t end = std::min(trials, (b + 1) * kMonteCarloBlock);
    for (std::size_t t = b * kMonteCarloBlock; t < end; ++t) {
      SeededSource rng(derive_seed(seed, t));
      const OutcomeMetrics om =
          outcome_metrics(market, opt, simulate_traced(instance, alg, rng).allocation);
      for (std::size_t k = 0; k < 3; ++k) {
        s.sum[k] += om.values[k];
        s.sum_sq[k] += om.values[k] * om.values[k];
        s.min[k] = std::min(s.min[k], om.values[k]);
      }
      s.non_ir |= !om.individually_rational;
      add_into(s.sum_u, om.util.u);
      add_into(s.sum_v, om.util.v);
      auto [it, fresh] = s.batches.try_emplace(
          t * num_batches / trials, 0, std::vector<double>(n, 0.0), std::vector<double>(m, 0.0));
      auto& [count, bu, bv] = it->second;
      ++count;
      add_into(bu, om.util.u);
      add_into(bv, om.util.v);
    }
  });

  BlockStats total;
  total.min.fill(std::numeric_limits<double>::infinity());
  total.sum_u.assign(n, 0.0);
  total.sum_v.assign(m, 0.0);
  std::vector<std::size_t> batch_count(num_batches, 0);
  std::vector<std::vector<double>> batch_u(num_batches, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> batch_v(num_batches, std::vector<double>(m, 0.0));
  for (const BlockStats& s : blocks) {
    for (std::size_t k = 0; k < 3; ++k) {
      total.sum[k] += s.sum[k];
      total.sum_sq[k] += s.sum_sq[k];
      total.min[k] = std::min(total.min[k], s.min[k]);
    }
    total.non_ir |= s.non_ir;
    add_into(total.sum_u, s.sum_u);
    add_into(total.sum_v, s.sum_v);
    for (const auto& [batch, data] : s.batches) {
      const auto& [count, bu, bv] = data;
      batch_count[batch] += count;
      add_into(batch_u[batch], bu);
      add_into(batch_v[batch], bv);
    }
  }

  FullEvaluation out;
  out.method = Method::kMonteCarlo;
  out.trials = trials;
  out.seed = seed;
  out.opt = opt;
  out.non_ir_outcomes = total.non_ir;
  const double dn = static_cast<double>(trials);
  out.expected_u = total.sum_u;
  out.expected_v = total.sum_v;
  for (double& x : out.expected_u) x /= dn;
  for (double& x : out.expected_v) x /= dn;
  const std::array<double, 3> avg =
      average_metrics(market, opt, out.expected_u, out.expected_v);

  // Batch means give the spread of the average-utility metrics.
  std::array<std::vector<double>, 3> batch_values;
  for (std::size_t b = 0; b < num_batches; ++b) {
    if (batch_count[b] == 0) continue;
    const double c = static_cast<double>(batch_count[b]);
    for (double& x : batch_u[b]) x /= c;
    for (double& x : batch_v[b]) x /= c;
    const auto vals = average_metrics(market, opt, batch_u[b], batch_v[b]);
    for (std::size_t k = 0; k < 3; ++k) batch_values[k].push_back(vals[k]);
  }

  for (std::size_t k = 0; k < 3; ++k) {
    Cell& post = out.cells[k][kPost];
    post.value = total.min[k];
    post.estimated = true;
    Cell& ante = out.cells[k][kAnte];
    ante.value = total.sum[k] / dn;
    ante.std_error = sample_std_error(total.sum[k], total.sum_sq[k], trials);
    ante.estimated = true;
    Cell& av = out.cells[k][kAvg];
    av.value = avg[k];
    av.estimated = true;
    const auto& bv = batch_values[k];
    if (bv.size() >= 2) {
      double s = 0.0;
      double ss = 0.0;
      for (double x : bv) {
        s += x;
        ss += x * x;
      }
      av.std_error = sample_std_error(s, ss, bv.size());
    } else {
      av.std_error = 0.0;
    }
  }
  // Expected welfare is linear, so the average and ex-ante optimality ratios
  // coincide; report one number for both.
  out.cells[kLambda][kAvg] = out.cells[kLambda][kAnte];
  return out;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kPost:
      return "post";
    case Mode::kAnte:
      return "ante";
    case Mode::kAvg:
      return "avg";
  }
  return "?";
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kLambda:
      return "lambda";
    case Metric::kNormSi:
      return "norm_si";
    case Metric::kKappa:
      return "kappa";
  }
  return "?";
}

std::string_view to_string(Method method) {
  return method == Method::kExact ? "exact" : "monte_carlo";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "post" || text == "ex-post") return Mode::kPost;
  if (text == "ante" || text == "ex-ante") return Mode::kAnte;
  if (text == "avg" || text == "average") return Mode::kAvg;
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view text) {
  if (text == "lambda") return Metric::kLambda;
  if (text == "norm_si" || text == "norm-si" || text == "J") return Metric::kNormSi;
  if (text == "kappa") return Metric::kKappa;
  return std::nullopt;
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "exact") return Method::kExact;
  if (text == "monte_carlo" || text == "monte-carlo" || text == "mc") {
    return Method::kMonteCarlo;
  }
  return std::nullopt;
}

double order_statistic_exp_mean(std::size_t k, std::size_t m) {
  if (k < 1 || k > m) throw DomainError("order statistic index out of range");
  // Confluent hypergeometric series 1F1(k; m + 1; 1).
  double term = 1.0;
  double sum = 1.0;
  for (std::size_t t = 0; t < 200; ++t) {
    term *= static_cast<double>(k + t) /
            (static_cast<double>(m + 1 + t) * static_cast<double>(t + 1));
    sum += term;
    if (term < 1e-18) break;
  }
  return sum;
}

Support enumerate_outcomes(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                           std::size_t max_atoms) {
  validate(instance);
  const std::size_t m = instance.market.num_sellers();
  const bool rank_only = alg.tag == AlgorithmTag::kRanking &&
                         alg.pricing.kind != PriceRule::Kind::kRandomShare &&
                         instance.model == ArrivalModel::kVertex &&
                         equal_positive_weights(instance.market);
  if (rank_only && m >= 1 && factorial_capped(m, max_atoms) <= max_atoms) {
    return rank_permutation_support(instance, alg);
  }

  Support support;
  EnumeratingSource source;
  do {
    if (support.atoms.size() >= max_atoms) {
      throw CapacityError("exact evaluation exceeds " + std::to_string(max_atoms) +
                          " outcomes; use the monte_carlo method");
    }
    TrackingSource tracked(source);
    Allocation alloc = simulate_traced(instance, alg, tracked).allocation;
    support.discretized |= tracked.used_uniform();
    support.atoms.push_back({std::move(alloc), source.probability()});
  } while (source.advance());
  return support;
}

FullEvaluation evaluate_distribution(const Market& market,
                                     std::span<const WeightedAllocation> atoms) {
  if (atoms.empty()) throw DomainError("empty outcome distribution");
  double total = 0.0;
  for (const auto& w : atoms) {
    if (!(w.probability >= 0.0)) throw DomainError("negative outcome probability");
    total += w.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("outcome probabilities sum to " + std::to_string(total));
  }
  FullEvaluation out;
  out.method = Method::kExact;
  out.support_size = atoms.size();
  out.opt = optimal_value(market);
  out.expected_u.assign(market.num_buyers(), 0.0);
  out.expected_v.assign(market.num_sellers(), 0.0);
  std::array<double, 3> ante{};
  std::array<double, 3> post;
  post.fill(std::numeric_limits<double>::infinity());
  for (const auto& w : atoms) {
    const OutcomeMetrics om = outcome_metrics(market, out.opt, w.allocation);
    out.non_ir_outcomes |= !om.individually_rational;
    for (std::size_t k = 0; k < 3; ++k) {
      ante[k] += w.probability * om.values[k];
      post[k] = std::min(post[k], om.values[k]);
    }
    for (std::size_t i = 0; i < om.util.u.size(); ++i) {
      out.expected_u[i] += w.probability * om.util.u[i];
    }
    for (std::size_t j = 0; j < om.util.v.size(); ++j) {
      out.expected_v[j] += w.probability * om.util.v[j];
    }
  }
  const std::array<double, 3> avg =
      average_metrics(market, out.opt, out.expected_u, out.expected_v);
  for (std::size_t k = 0; k < 3; ++k) {
    out.cells[k][kPost].value = post[k];
    out.cells[k][kAnte].value = ante[k];
    out.cells[k][kAvg].value = avg[k];
  }
  out.cells[kLambda][kAvg].value = ante[kLambda];
  return out;
}

FullEvaluation evaluate_all(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                            Method method, std::size_t trials, std::uint64_t seed) {
  if (method == Method::kMonteCarlo && alg.randomized()) {
    return monte_carlo(instance, alg, trials, seed);
  }
  const Support support = enumerate_outcomes(instance, alg);
  FullEvaluation out = evaluate_distribution(instance.market, support.atoms);
  out.seed = seed;
  out.discretized = support.discretized;
  if (support.discretized) {
    for (auto& row : out.cells) {
      for (Cell& c : row) c.estimated = true;
    }
  }
  if (support.rank_permutations) {
    // Matchings depend on the rank order only, so expected utilities and
    // every lambda cell are exact; per-outcome stability values are not.
    for (std::size_t k : {kNormSi, kKappa}) {
      out.cells[k][kPost].estimated = true;
      out.cells[k][kAnte].estimated = true;
    }
  }
  return out;
}

EvalReport evaluate(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                    const EvalConfig& config) {
  const FullEvaluation full =
      evaluate_all(instance, alg, config.method, config.trials, config.seed);
  const Cell& cell = full.at(config.metric, config.mode);
  EvalReport r;
  r.metric = config.metric;
  r.mode = config.mode;
  r.value = cell.value;
  r.std_error = cell.std_error;
  r.estimated = cell.estimated;
  r.method = full.method;
  r.support_size = full.support_size;
  r.trials = full.trials;
  r.seed = config.seed;
  r.expected_u = full.expected_u;
  r.expected_v = full.expected_v;
  r.non_ir_outcomes = full.non_ir_outcomes;
  return r;
}

double avg_subset_instability(const Market& market, std::span<const double> expected_u,
                              std::span<const double> expected_v) {
  return subset_instability(market, expected_u, expected_v);
}

AuditReport audit_evaluation(const FullEvaluation& evaluation, double tol) {
  AuditReport report;
  report.evaluation = evaluation;
  const auto& c = evaluation.cells;
  auto witness = [&](std::size_t metric, std::size_t mode) {
    std::ostringstream os;
    os << to_string(static_cast<Metric>(metric)) << "^" << to_string(static_cast<Mode>(mode))
       << "=" << c[metric][mode].value;
    return os.str();
  };
  for (std::size_t k = 0; k < 3; ++k) {
    if (k == kKappa && evaluation.non_ir_outcomes) continue;
    for (std::size_t g = 0; g + 1 < 3; ++g) {
      if (c[k][g].value > c[k][g + 1].value + tol) {
        report.violations.push_back("mode chain: " + witness(k, g) + " > " + witness(k, g + 1));
      }
    }
  }
  for (std::size_t g = 0; g < 3; ++g) {
    if (!evaluation.non_ir_outcomes && c[kKappa][g].value > c[kNormSi][g].value + tol) {
      report.violations.push_back("metric chain: " + witness(kKappa, g) + " > " +
                                  witness(kNormSi, g));
    }
    if (c[kNormSi][g].value > c[kLambda][g].value + tol) {
      report.violations.push_back("metric chain: " + witness(kNormSi, g) + " > " +
                                  witness(kLambda, g));
    }
  }
  if (std::abs(c[kLambda][kAnte].value - c[kLambda][kAvg].value) > tol) {
    report.violations.push_back("lambda ante/avg mismatch: " + witness(kLambda, kAnte) +
                                " vs " + witness(kLambda, kAvg));
  }
  return report;
}

AuditReport inequality_audit(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                             double tol) {
  return audit_evaluation(evaluate_all(instance, alg, Method::kExact), tol);
}

}  // namespace stablematch
