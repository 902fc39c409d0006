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

#ifndef STABLEMATCH_ONLINE_HPP_
#define STABLEMATCH_ONLINE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stablematch/market.hpp"
#include "stablematch/random_source.hpp"

namespace stablematch {

enum class ArrivalModel { kEdge, kVertex };

std::string_view to_string(ArrivalModel model);

// A market plus the order in which it is revealed. In the vertex model
// `order` lists buyer indices; in the edge model it lists edge indices
// i * num_sellers + j over the positive-surplus pairs.
struct OnlineInstance {
  Market market;
  ArrivalModel model = ArrivalModel::kVertex;
  std::vector<std::size_t> order;
  bool free_disposal = false;
  bool vertex_weighted = false;

  friend bool operator==(const OnlineInstance&, const OnlineInstance&) = default;
};

inline std::size_t edge_index(const Market& market, std::size_t buyer,
                              std::size_t seller) {
  return buyer * market.num_sellers() + seller;
}

// Positive-surplus pairs as edge indices in row-major order.
std::vector<std::size_t> declared_edges(const Market& market);

// True when every seller's positive surpluses are all equal.
bool is_vertex_weighted(const Market& market);

// Throws ConfigError / SchemaError on a non-permutation order, free disposal
// outside the vertex model, or a false vertex_weighted flag.
void validate(const OnlineInstance& instance);

// Vertex model over buyers 0..n-1 in index order.
OnlineInstance vertex_instance(Market market, bool free_disposal = false);

// What an online algorithm may see at one arrival: the current allocation
// and the surpluses revealed so far. Reading an unrevealed surplus throws.
class ArrivalView {
 public:
  ArrivalView(const OnlineInstance& instance, const Allocation& alloc,
              const std::vector<bool>& revealed, std::size_t buyer,
              std::size_t seller)
      : instance_(instance), alloc_(alloc), revealed_(revealed), buyer_(buyer),
        seller_(seller) {}

  ArrivalModel model() const { return instance_.model; }
  bool free_disposal() const { return instance_.free_disposal; }
  std::size_t num_sellers() const { return instance_.market.num_sellers(); }
  std::size_t num_buyers() const { return instance_.market.num_buyers(); }

  // Arriving buyer (both models) and, in the edge model, arriving seller.
  std::size_t buyer() const { return buyer_; }
  std::size_t seller() const { return seller_; }

  double surplus(std::size_t buyer, std::size_t seller) const;
  double cost(std::size_t seller) const { return instance_.market.costs().at(seller); }
  const Allocation& allocation() const { return alloc_; }

  // Sellers with positive surplus for the arriving buyer (vertex model).
  std::vector<std::size_t> neighbors() const;
  // Surplus currently realised by seller j's match, 0 if unmatched.
  double assigned_surplus(std::size_t seller) const;

 private:
  const OnlineInstance& instance_;
  const Allocation& alloc_;
  const std::vector<bool>& revealed_;
  std::size_t buyer_;
  std::size_t seller_;
};

// Vertex model: seller to match the arriving buyer with (kUnmatched to leave
// it alone). Edge model: seller == view.seller() accepts the edge.
struct Decision {
  std::size_t seller = kUnmatched;
  double price = 0.0;
};

class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;
  // Called once before the first arrival.
  virtual void start(const OnlineInstance& /*instance*/, RandomSource& /*rng*/) {}
  virtual Decision decide(const ArrivalView& view, RandomSource& rng) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<OnlinePolicy>()>;

enum class AlgorithmTag { kGreedy, kGreedyHalf, kRanking, kGreedyFreeDisposal, kCustom };

// How a newly formed pair splits its surplus a: the seller receives
// share * a, i.e. p = c + share * a.
struct PriceRule {
  enum class Kind { kShare, kRandomShare, kRankThreshold };
  Kind kind = Kind::kShare;
  double share = 0.5;
  std::vector<double> shares;  // kRandomShare draws one uniformly per pair
};

struct OnlineAlgorithm {
  AlgorithmTag tag = AlgorithmTag::kGreedy;
  PriceRule pricing;
  bool randomize_ties = false;
  PolicyFactory custom;  // kCustom only
  bool custom_randomized = true;
  std::string name = "greedy";

  std::unique_ptr<OnlinePolicy> make_policy() const;
  // True when the algorithm may consume randomness.
  bool randomized() const;
};

OnlineAlgorithm greedy(double seller_share = 0.5);
OnlineAlgorithm greedy_half();
OnlineAlgorithm ranking();
OnlineAlgorithm greedy_free_disposal(bool randomize_ties = false);
OnlineAlgorithm custom_algorithm(std::string name, PolicyFactory factory,
                                 bool randomized = true);
// Same matching decisions, every new pair priced at c + a / 2.
OnlineAlgorithm half_wrapper(OnlineAlgorithm alg);

std::optional<OnlineAlgorithm> algorithm_by_name(std::string_view name);

// g(y) = e^(y - 1): the seller's share of surplus under Ranking with rank y.
double ranking_threshold(double rank);

struct StepRecord {
  std::size_t arrival = 0;  // position in the order
  std::size_t buyer = kUnmatched;
  std::size_t seller = kUnmatched;  // decided partner, kUnmatched if none
  double price = 0.0;
  std::size_t displaced = kUnmatched;  // buyer dropped by free disposal

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct SimulationResult {
  Allocation allocation;
  std::vector<StepRecord> trace;
};

SimulationResult simulate_traced(const OnlineInstance& instance,
                                 const OnlineAlgorithm& alg, RandomSource& rng);
SimulationResult simulate_traced(const OnlineInstance& instance,
                                 const OnlineAlgorithm& alg, std::uint64_t seed);
Allocation simulate(const OnlineInstance& instance, const OnlineAlgorithm& alg,
                    std::uint64_t seed);

}  // namespace stablematch

#endif  // STABLEMATCH_ONLINE_HPP_
