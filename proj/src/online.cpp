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

#include "stablematch/online.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stablematch/errors.hpp"

namespace stablematch {
namespace {

double pair_price(const PriceRule& rule, double surplus, double cost,
                  RandomSource& rng) {
  switch (rule.kind) {
    case PriceRule::Kind::kRandomShare:
      if (!rule.shares.empty()) {
        return cost + rule.shares[rng.choice(rule.shares.size())] * surplus;
      }
      return cost + rule.share * surplus;
    case PriceRule::Kind::kShare:
    case PriceRule::Kind::kRankThreshold:
      return cost + rule.share * surplus;
  }
  return cost + 0.5 * surplus;
}

// Picks among tied candidates: the first one, or a uniform one.
std::size_t pick(const std::vector<std::size_t>& tied, bool randomize,
                 RandomSource& rng) {
  if (!randomize || tied.size() == 1) return tied.front();
  return tied[rng.choice(tied.size())];
}

class GreedyPolicy final : public OnlinePolicy {
 public:
  GreedyPolicy(PriceRule pricing, bool randomize_ties)
      : pricing_(std::move(pricing)), randomize_ties_(randomize_ties) {}

  Decision decide(const ArrivalView& view, RandomSource& rng) override {
    const Matching& mu = view.allocation().matching;
    if (view.model() == ArrivalModel::kEdge) {
      const std::size_t i = view.buyer();
      const std::size_t j = view.seller();
      const double a = view.surplus(i, j);
      if (a <= 0.0 || mu.buyer_matched(i) || mu.seller_matched(j)) return {};
      return {j, pair_price(pricing_, a, view.cost(j), rng)};
    }
    double best = 0.0;
    std::vector<std::size_t> tied;
    for (std::size_t j : view.neighbors()) {
      if (mu.seller_matched(j)) continue;
      const double a = view.surplus(view.buyer(), j);
      if (tied.empty() || a > best + kTolerance) {
        best = a;
        tied.assign(1, j);
      } else if (a >= best - kTolerance) {
        tied.push_back(j);
      }
    }
    if (tied.empty()) return {};
    const std::size_t j = pick(tied, randomize_ties_, rng);
    return {j, pair_price(pricing_, view.surplus(view.buyer(), j), view.cost(j), rng)};
  }

 private:
  PriceRule pricing_;
  bool randomize_ties_;
};

class RankingPolicy final : public OnlinePolicy {
 public:
  explicit RankingPolicy(PriceRule pricing) : pricing_(std::move(pricing)) {}

  void start(const OnlineInstance& instance, RandomSource& rng) override {
    rank_.resize(instance.market.num_sellers());
    for (double& y : rank_) y = rng.uniform01();
  }

  Decision decide(const ArrivalView& view, RandomSource& rng) override {
    const Matching& mu = view.allocation().matching;
    std::size_t chosen = kUnmatched;
    double best = 0.0;
    for (std::size_t j : view.neighbors()) {
      if (mu.seller_matched(j)) continue;
      const double score =
          view.surplus(view.buyer(), j) * (1.0 - ranking_threshold(rank_[j]));
      if (chosen == kUnmatched || score > best) {
        chosen = j;
        best = score;
      }
    }
    if (chosen == kUnmatched) return {};
    const double a = view.surplus(view.buyer(), chosen);
    if (pricing_.kind == PriceRule::Kind::kRankThreshold) {
      return {chosen, view.cost(chosen) + ranking_threshold(rank_[chosen]) * a};
    }
    return {chosen, pair_price(pricing_, a, view.cost(chosen), rng)};
  }

 private:
  PriceRule pricing_;
  std::vector<double> rank_;
};

class FreeDisposalGreedyPolicy final : public OnlinePolicy {
 public:
  FreeDisposalGreedyPolicy(PriceRule pricing, bool randomize_ties)
      : pricing_(std::move(pricing)), randomize_ties_(randomize_ties) {}

  Decision decide(const ArrivalView& view, RandomSource& rng) override {
    const Matching& mu = view.allocation().matching;
    double best = 0.0;
    std::vector<std::size_t> tied;
    for (std::size_t j : view.neighbors()) {
      const double gain = view.surplus(view.buyer(), j) - view.assigned_surplus(j);
      if (tied.empty() || gain > best + kTolerance) {
        best = gain;
        tied.assign(1, j);
      } else if (gain >= best - kTolerance) {
        tied.push_back(j);
      }
    }
    if (tied.empty() || best <= kTolerance) return {};
    // Equal gains: keep incumbents where possible.
    std::vector<std::size_t> free_sellers;
    for (std::size_t j : tied) {
      if (!mu.seller_matched(j)) free_sellers.push_back(j);
    }
    const std::size_t j =
        pick(free_sellers.empty() ? tied : free_sellers, randomize_ties_, rng);
    return {j, pair_price(pricing_, view.surplus(view.buyer(), j), view.cost(j), rng)};
  }

 private:
  PriceRule pricing_;
  bool randomize_ties_;
};

void check_applicable(const OnlineInstance& instance, const OnlineAlgorithm& alg) {
  switch (alg.tag) {
    case AlgorithmTag::kRanking:
      if (instance.model != ArrivalModel::kVertex) {
        throw ConfigError("ranking requires the vertex arrival model");
      }
      if (!is_vertex_weighted(instance.market)) {
        throw ConfigError("ranking requires a vertex-weighted instance");
      }
      break;
    case AlgorithmTag::kGreedyFreeDisposal:
      if (instance.model != ArrivalModel::kVertex || !instance.free_disposal) {
        throw ConfigError(
            "greedy-free-disposal requires the vertex model with free disposal");
      }
      break;
    case AlgorithmTag::kCustom:
      if (!alg.custom) throw ConfigError("custom algorithm without a policy factory");
      break;
    case AlgorithmTag::kGreedy:
    case AlgorithmTag::kGreedyHalf:
      break;
  }
}

}  // namespace

std::string_view to_string(ArrivalModel model) {
  return model == ArrivalModel::kEdge ? "edge" : "vertex";
}

std::vector<std::size_t> declared_edges(const Market& market) {
  std::vector<std::size_t> edges;
  for (std::size_t i = 0; i < market.num_buyers(); ++i) {
    for (std::size_t j = 0; j < market.num_sellers(); ++j) {
      if (market.surplus(i, j) > 0.0) edges.push_back(edge_index(market, i, j));
    }
  }
  return edges;
}

bool is_vertex_weighted(const Market& market) {
  for (std::size_t j = 0; j < market.num_sellers(); ++j) {
    double weight = 0.0;
    for (std::size_t i = 0; i < market.num_buyers(); ++i) {
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

void validate(const OnlineInstance& instance) {
  std::vector<std::size_t> expected;
  if (instance.model == ArrivalModel::kVertex) {
    for (std::size_t i = 0; i < instance.market.num_buyers(); ++i) expected.push_back(i);
  } else {
    expected = declared_edges(instance.market);
    if (instance.free_disposal) {
      throw ConfigError("free disposal applies to the vertex arrival model only");
    }
  }
  std::vector<std::size_t> sorted = instance.order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != expected) {
    throw SchemaError(std::string("arrival order is not a permutation of the ") +
                      (instance.model == ArrivalModel::kVertex ? "buyers"
                                                               : "positive-surplus edges"));
  }
  if (instance.vertex_weighted && !is_vertex_weighted(instance.market)) {
    throw SchemaError("instance is flagged vertex-weighted but a seller has unequal "
                      "positive surpluses");
  }
}

OnlineInstance vertex_instance(Market market, bool free_disposal) {
  OnlineInstance inst;
  inst.order.resize(market.num_buyers());
  for (std::size_t i = 0; i < inst.order.size(); ++i) inst.order[i] = i;
  inst.vertex_weighted = is_vertex_weighted(market);
  inst.market = std::move(market);
  inst.model = ArrivalModel::kVertex;
  inst.free_disposal = free_disposal;
  return inst;
}

double ArrivalView::surplus(std::size_t buyer, std::size_t seller) const {
  const std::size_t m = instance_.market.num_sellers();
  if (buyer >= instance_.market.num_buyers() || seller >= m) {
    throw StructuralError("surplus query out of range");
  }
  if (!revealed_[buyer * m + seller]) {
    throw Error("online algorithm read a surplus that has not arrived yet");
  }
  return instance_.market.surplus(buyer, seller);
}

std::vector<std::size_t> ArrivalView::neighbors() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < num_sellers(); ++j) {
    if (surplus(buyer_, j) > 0.0) out.push_back(j);
  }
  return out;
}

double ArrivalView::assigned_surplus(std::size_t seller) const {
  const std::size_t b = alloc_.matching.buyer_of(seller);
  return b == kUnmatched ? 0.0 : instance_.market.surplus(b, seller);
}

double ranking_threshold(double rank) { return std::exp(rank - 1.0); }

std::unique_ptr<OnlinePolicy> OnlineAlgorithm::make_policy() const {
  switch (tag) {
    case AlgorithmTag::kGreedy:
    case AlgorithmTag::kGreedyHalf:
      return std::make_unique<GreedyPolicy>(pricing, randomize_ties);
    case AlgorithmTag::kRanking:
      return std::make_unique<RankingPolicy>(pricing);
    case AlgorithmTag::kGreedyFreeDisposal:
      return std::make_unique<FreeDisposalGreedyPolicy>(pricing, randomize_ties);
    case AlgorithmTag::kCustom:
      if (!custom) throw ConfigError("custom algorithm without a policy factory");
      return custom();
  }
  throw ConfigError("unknown algorithm");
}

bool OnlineAlgorithm::randomized() const {
  if (tag == AlgorithmTag::kCustom) return custom_randomized;
  return tag == AlgorithmTag::kRanking || randomize_ties ||
         pricing.kind == PriceRule::Kind::kRandomShare;
}

OnlineAlgorithm greedy(double seller_share) {
  OnlineAlgorithm alg;
  alg.tag = AlgorithmTag::kGreedy;
  alg.pricing.share = seller_share;
  alg.name = "greedy";
  return alg;
}

OnlineAlgorithm greedy_half() {
  OnlineAlgorithm alg;
  alg.tag = AlgorithmTag::kGreedyHalf;
  alg.name = "greedy-half";
  return alg;
}

OnlineAlgorithm ranking() {
  OnlineAlgorithm alg;
  alg.tag = AlgorithmTag::kRanking;
  alg.pricing.kind = PriceRule::Kind::kRankThreshold;
  alg.name = "ranking";
  return alg;
}

OnlineAlgorithm greedy_free_disposal(bool randomize_ties) {
  OnlineAlgorithm alg;
  alg.tag = AlgorithmTag::kGreedyFreeDisposal;
  alg.randomize_ties = randomize_ties;
  alg.name = randomize_ties ? "greedy-free-disposal-random-ties" : "greedy-free-disposal";
  return alg;
}

OnlineAlgorithm custom_algorithm(std::string name, PolicyFactory factory,
                                 bool randomized) {
  OnlineAlgorithm alg;
  alg.tag = AlgorithmTag::kCustom;
  alg.custom = std::move(factory);
  alg.custom_randomized = randomized;
  alg.name = std::move(name);
  return alg;
}

OnlineAlgorithm half_wrapper(OnlineAlgorithm alg) {
  if (alg.tag == AlgorithmTag::kCustom) {
    // Re-price whatever the wrapped policy decides.
    class HalfPriced final : public OnlinePolicy {
     public:
      explicit HalfPriced(std::unique_ptr<OnlinePolicy> inner) : inner_(std::move(inner)) {}
      void start(const OnlineInstance& instance, RandomSource& rng) override {
        inner_->start(instance, rng);
      }
      Decision decide(const ArrivalView& view, RandomSource& rng) override {
        Decision d = inner_->decide(view, rng);
        if (d.seller != kUnmatched) {
          d.price = view.cost(d.seller) + 0.5 * view.surplus(view.buyer(), d.seller);
        }
        return d;
      }

     private:
      std::unique_ptr<OnlinePolicy> inner_;
    };
    PolicyFactory inner = alg.custom;
    alg.custom = [inner] { return std::make_unique<HalfPriced>(inner()); };
  }
  alg.pricing = PriceRule{};
  alg.name += "+half";
  return alg;
}

std::optional<OnlineAlgorithm> algorithm_by_name(std::string_view name) {
  if (name == "greedy") return greedy();
  if (name == "greedy-half") return greedy_half();
  if (name == "ranking") return ranking();
  if (name == "ranking-half") return half_wrapper(ranking());
  if (name == "greedy-free-disposal") return greedy_free_disposal(false);
  if (name == "greedy-free-disposal-random-ties") return greedy_free_disposal(true);
  return std::nullopt;
}

SimulationResult simulate_traced(const OnlineInstance& instance,
                                 const OnlineAlgorithm& alg, RandomSource& rng) {
  validate(instance);
  check_applicable(instance, alg);
  const Market& market = instance.market;
  const std::size_t m = market.num_sellers();
  SimulationResult out{allocation_at_cost(market, Matching(market.num_buyers(), m)), {}};
  std::vector<bool> revealed(market.num_buyers() * m, false);
  std::unique_ptr<OnlinePolicy> policy = alg.make_policy();
  policy->start(instance, rng);

  for (std::size_t t = 0; t < instance.order.size(); ++t) {
    const std::size_t idx = instance.order[t];
    StepRecord step;
    step.arrival = t;
    std::size_t arriving_seller = kUnmatched;
    if (instance.model == ArrivalModel::kVertex) {
      step.buyer = idx;
      for (std::size_t j = 0; j < m; ++j) revealed[idx * m + j] = true;
    } else {
      step.buyer = idx / m;
      arriving_seller = idx % m;
      revealed[idx] = true;
    }
    const ArrivalView view(instance, out.allocation, revealed, step.buyer,
                           arriving_seller);
    const Decision d = policy->decide(view, rng);
    if (d.seller != kUnmatched) {
      if (d.seller >= m) throw ConfigError(alg.name + " chose a seller out of range");
      if (!std::isfinite(d.price)) throw ConfigError(alg.name + " set a non-finite price");
      Matching& mu = out.allocation.matching;
      if (instance.model == ArrivalModel::kEdge) {
        if (d.seller != arriving_seller) {
          throw ConfigError(alg.name + " matched a seller other than the arriving edge's");
        }
        if (mu.buyer_matched(step.buyer) || mu.seller_matched(d.seller)) {
          throw ConfigError(alg.name + " accepted an edge with a matched endpoint");
        }
      } else if (mu.seller_matched(d.seller)) {
        if (!instance.free_disposal) {
          throw ConfigError(alg.name + " reassigned a seller without free disposal");
        }
        step.displaced = mu.buyer_of(d.seller);
        mu.unmatch_buyer(step.displaced);
      }
      mu.match(step.buyer, d.seller);
      out.allocation.prices[d.seller] = d.price;
      step.seller = d.seller;
      step.price = d.price;
    }
    out.trace.push_back(step);
  }
  // Displaced sellers keep their rewritten price; sellers left unmatched
  // fall back to cost.
  for (std::size_t j = 0; j < m; ++j) {
    if (!out.allocation.matching.seller_matched(j)) {
      out.allocation.prices[j] = market.costs()[j];
    }
  }
  return out;
}

SimulationResult simulate_traced(const OnlineInstance& instance,
                                 const OnlineAlgorithm& alg, std::uint64_t seed) {
  SeededSource rng(seed);
  return simulate_traced(instance, alg, rng);
}

Allocation simulate(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                    std::uint64_t seed) {
  return simulate_traced(instance, alg, seed).allocation;
}

}  // namespace stablematch
