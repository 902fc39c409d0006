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

#ifndef STABLEMATCH_MARKET_HPP_
#define STABLEMATCH_MARKET_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stablematch/matrix.hpp"

namespace stablematch {

// Absolute tolerance for every money comparison in the library.
inline constexpr double kTolerance = 1e-9;

inline constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

// A pair whose valuation was raised to the seller cost at construction so
// that its surplus is zero instead of negative.
struct SurplusClamp {
  std::size_t buyer;
  std::size_t seller;
  double original_surplus;

  friend bool operator==(const SurplusClamp&, const SurplusClamp&) = default;
};

// Two-sided market of buyers and sellers. Buyer i values seller j's good at
// valuations(i, j) and seller j's reservation cost is costs[j]; the surplus
// of the pair is valuations(i, j) - costs[j] and is never negative.
class Market {
 public:
  Market() = default;
  Market(std::vector<std::string> buyer_ids, std::vector<std::string> seller_ids,
         Matrix valuations, std::vector<double> costs);

  // Market with the given surplus matrix, zero costs and generated labels
  // B0.., S0...
  static Market from_surplus(const Matrix& surplus);

  std::size_t num_buyers() const { return buyer_ids_.size(); }
  std::size_t num_sellers() const { return seller_ids_.size(); }

  const std::vector<std::string>& buyer_ids() const { return buyer_ids_; }
  const std::vector<std::string>& seller_ids() const { return seller_ids_; }
  const Matrix& valuations() const { return valuations_; }
  const std::vector<double>& costs() const { return costs_; }
  const Matrix& surplus() const { return surplus_; }
  double surplus(std::size_t buyer, std::size_t seller) const {
    return surplus_(buyer, seller);
  }
  const std::vector<SurplusClamp>& clamps() const { return clamps_; }

  // Resolves a label by exact match first, then by unique prefix.
  std::optional<std::size_t> find_buyer(std::string_view label) const;
  std::optional<std::size_t> find_seller(std::string_view label) const;

  // Same market with every valuation and cost multiplied by factor > 0.
  Market scaled(double factor) const;

  friend bool operator==(const Market& a, const Market& b) {
    return a.buyer_ids_ == b.buyer_ids_ && a.seller_ids_ == b.seller_ids_ &&
           a.valuations_ == b.valuations_ && a.costs_ == b.costs_;
  }

 private:
  std::vector<std::string> buyer_ids_;
  std::vector<std::string> seller_ids_;
  Matrix valuations_;
  std::vector<double> costs_;
  Matrix surplus_;
  std::vector<SurplusClamp> clamps_;
};

// One-to-one partial matching between buyers and sellers.
class Matching {
 public:
  Matching() = default;
  Matching(std::size_t num_buyers, std::size_t num_sellers)
      : seller_of_(num_buyers, kUnmatched), buyer_of_(num_sellers, kUnmatched) {}

  // Throws StructuralError on out-of-range indices or a repeated agent.
  static Matching from_pairs(
      std::size_t num_buyers, std::size_t num_sellers,
      std::span<const std::pair<std::size_t, std::size_t>> pairs);

  std::size_t num_buyers() const { return seller_of_.size(); }
  std::size_t num_sellers() const { return buyer_of_.size(); }

  std::size_t seller_of(std::size_t buyer) const { return seller_of_.at(buyer); }
  std::size_t buyer_of(std::size_t seller) const { return buyer_of_.at(seller); }
  bool buyer_matched(std::size_t buyer) const {
    return seller_of(buyer) != kUnmatched;
  }
  bool seller_matched(std::size_t seller) const {
    return buyer_of(seller) != kUnmatched;
  }

  void match(std::size_t buyer, std::size_t seller);
  void unmatch_buyer(std::size_t buyer);

  // Matched pairs ordered by buyer index.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  std::size_t size() const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<std::size_t> seller_of_;
  std::vector<std::size_t> buyer_of_;
};

// A matching together with one price per seller. The stored price of an
// unmatched seller is ignored; its effective price is its cost.
struct Allocation {
  Matching matching;
  std::vector<double> prices;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct UtilityProfile {
  std::vector<double> u;  // buyers
  std::vector<double> v;  // sellers
};

Matrix surplus_matrix(const Market& market);

// Throws StructuralError when the matching or price vector does not fit the
// market.
void check_fits(const Market& market, const Matching& matching);
void check_fits(const Market& market, const Allocation& alloc);

// Allocation on `matching` with every seller priced at its cost.
Allocation allocation_at_cost(const Market& market, const Matching& matching);

UtilityProfile utilities(const Market& market, const Allocation& alloc);

double social_welfare(const Market& market, const Matching& matching);

bool is_individually_rational(const Market& market, const Allocation& alloc,
                              double tol = kTolerance);
// First pair (row-major) with u_i + v_j < a_ij - tol.
std::optional<std::pair<std::size_t, std::size_t>> find_blocking_pair(
    const Market& market, const Allocation& alloc, double tol = kTolerance);
bool is_stable(const Market& market, const Allocation& alloc,
               double tol = kTolerance);

// "Alice-Dori,Bob-Edward" with labels resolved by Market::find_buyer/seller.
// An empty string is the empty matching.
Matching parse_matching(const Market& market, std::string_view text);
// Comma-separated prices in seller order.
std::vector<double> parse_prices(const Market& market, std::string_view text);

}  // namespace stablematch

#endif  // STABLEMATCH_MARKET_HPP_
