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

#include "stablematch/market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "stablematch/errors.hpp"

namespace stablematch {
namespace {

std::optional<std::size_t> resolve_label(const std::vector<std::string>& ids,
                                         std::string_view label) {
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] == label) return k;
  }
  std::optional<std::size_t> hit;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (std::string_view(ids[k]).starts_with(label)) {
      if (hit) return std::nullopt;  // ambiguous
      hit = k;
    }
  }
  return hit;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

}  // namespace

Market::Market(std::vector<std::string> buyer_ids,
               std::vector<std::string> seller_ids, Matrix valuations,
               std::vector<double> costs)
    : buyer_ids_(std::move(buyer_ids)),
      seller_ids_(std::move(seller_ids)),
      valuations_(std::move(valuations)),
      costs_(std::move(costs)) {
  const std::size_t n = buyer_ids_.size();
  const std::size_t m = seller_ids_.size();
  if (costs_.size() != m) {
    throw StructuralError("expected " + std::to_string(m) + " seller costs, got " +
                          std::to_string(costs_.size()));
  }
  if (n > 0 && m > 0 && (valuations_.rows() != n || valuations_.cols() != m)) {
    throw StructuralError("valuation matrix is " +
                          std::to_string(valuations_.rows()) + "x" +
                          std::to_string(valuations_.cols()) + ", expected " +
                          std::to_string(n) + "x" + std::to_string(m));
  }
  if (n == 0 || m == 0) valuations_ = Matrix(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isfinite(costs_[j]) || costs_[j] < 0.0) {
      throw DomainError("cost of seller " + seller_ids_[j] +
                        " must be finite and non-negative");
    }
  }
  surplus_ = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double h = valuations_(i, j);
      if (!std::isfinite(h) || h < 0.0) {
        throw DomainError("valuation of " + buyer_ids_[i] + " for " +
                          seller_ids_[j] + " must be finite and non-negative");
      }
      if (h < costs_[j]) {
        clamps_.push_back({i, j, h - costs_[j]});
        valuations_(i, j) = costs_[j];
      }
      surplus_(i, j) = valuations_(i, j) - costs_[j];
    }
  }
}

Market Market::from_surplus(const Matrix& surplus) {
  std::vector<std::string> buyers, sellers;
  for (std::size_t i = 0; i < surplus.rows(); ++i) {
    buyers.push_back("B" + std::to_string(i));
  }
  for (std::size_t j = 0; j < surplus.cols(); ++j) {
    sellers.push_back("S" + std::to_string(j));
  }
  return Market(std::move(buyers), std::move(sellers), surplus,
                std::vector<double>(surplus.cols(), 0.0));
}

std::optional<std::size_t> Market::find_buyer(std::string_view label) const {
  return resolve_label(buyer_ids_, label);
}

std::optional<std::size_t> Market::find_seller(std::string_view label) const {
  return resolve_label(seller_ids_, label);
}

Market Market::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  Matrix h = valuations_;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) *= factor;
  }
  std::vector<double> c = costs_;
  for (double& x : c) x *= factor;
  return Market(buyer_ids_, seller_ids_, std::move(h), std::move(c));
}

Matching Matching::from_pairs(
    std::size_t num_buyers, std::size_t num_sellers,
    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  Matching m(num_buyers, num_sellers);
  for (const auto& [i, j] : pairs) m.match(i, j);
  return m;
}

void Matching::match(std::size_t buyer, std::size_t seller) {
  if (buyer >= seller_of_.size() || seller >= buyer_of_.size()) {
    throw StructuralError("pair (" + std::to_string(buyer) + ", " +
                          std::to_string(seller) + ") is out of range");
  }
  if (seller_of_[buyer] != kUnmatched || buyer_of_[seller] != kUnmatched) {
    throw StructuralError("agent in pair (" + std::to_string(buyer) + ", " +
                          std::to_string(seller) + ") is already matched");
  }
  seller_of_[buyer] = seller;
  buyer_of_[seller] = buyer;
}

void Matching::unmatch_buyer(std::size_t buyer) {
  const std::size_t seller = seller_of_.at(buyer);
  if (seller == kUnmatched) return;
  seller_of_[buyer] = kUnmatched;
  buyer_of_[seller] = kUnmatched;
}

std::vector<std::pair<std::size_t, std::size_t>> Matching::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < seller_of_.size(); ++i) {
    if (seller_of_[i] != kUnmatched) out.emplace_back(i, seller_of_[i]);
  }
  return out;
}

std::size_t Matching::size() const {
  return static_cast<std::size_t>(
      std::count_if(seller_of_.begin(), seller_of_.end(),
                    [](std::size_t s) { return s != kUnmatched; }));
}

Matrix surplus_matrix(const Market& market) { return market.surplus(); }

void check_fits(const Market& market, const Matching& matching) {
  if (matching.num_buyers() != market.num_buyers() ||
      matching.num_sellers() != market.num_sellers()) {
    throw StructuralError("matching is sized " +
                          std::to_string(matching.num_buyers()) + "x" +
                          std::to_string(matching.num_sellers()) +
                          " but the market is " +
                          std::to_string(market.num_buyers()) + "x" +
                          std::to_string(market.num_sellers()));
  }
}

void check_fits(const Market& market, const Allocation& alloc) {
  check_fits(market, alloc.matching);
  if (alloc.prices.size() != market.num_sellers()) {
    throw StructuralError("expected " + std::to_string(market.num_sellers()) +
                          " prices, got " + std::to_string(alloc.prices.size()));
  }
  for (double p : alloc.prices) {
    if (!std::isfinite(p)) throw DomainError("prices must be finite");
  }
}

Allocation allocation_at_cost(const Market& market, const Matching& matching) {
  check_fits(market, matching);
  return {matching, market.costs()};
}

UtilityProfile utilities(const Market& market, const Allocation& alloc) {
  check_fits(market, alloc);
  UtilityProfile out{std::vector<double>(market.num_buyers(), 0.0),
                     std::vector<double>(market.num_sellers(), 0.0)};
  for (const auto& [i, j] : alloc.matching.pairs()) {
    out.u[i] = market.valuations()(i, j) - alloc.prices[j];
    out.v[j] = alloc.prices[j] - market.costs()[j];
  }
  return out;
}

double social_welfare(const Market& market, const Matching& matching) {
  check_fits(market, matching);
  double sw = 0.0;
  for (const auto& [i, j] : matching.pairs()) sw += market.surplus(i, j);
  return sw;
}

bool is_individually_rational(const Market& market, const Allocation& alloc,
                              double tol) {
  const UtilityProfile util = utilities(market, alloc);
  return std::all_of(util.u.begin(), util.u.end(),
                     [tol](double x) { return x >= -tol; }) &&
         std::all_of(util.v.begin(), util.v.end(),
                     [tol](double x) { return x >= -tol; });
}

std::optional<std::pair<std::size_t, std::size_t>> find_blocking_pair(
    const Market& market, const Allocation& alloc, double tol) {
  const UtilityProfile util = utilities(market, alloc);
  for (std::size_t i = 0; i < market.num_buyers(); ++i) {
    for (std::size_t j = 0; j < market.num_sellers(); ++j) {
      if (util.u[i] + util.v[j] < market.surplus(i, j) - tol) {
        return std::pair{i, j};
      }
    }
  }
  return std::nullopt;
}

bool is_stable(const Market& market, const Allocation& alloc, double tol) {
  return is_individually_rational(market, alloc, tol) &&
         !find_blocking_pair(market, alloc, tol);
}

Matching parse_matching(const Market& market, std::string_view text) {
  Matching m(market.num_buyers(), market.num_sellers());
  if (trim(text).empty()) return m;
  for (std::string_view item : split(text, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      throw SchemaError("matching entry '" + std::string(item) +
                        "' is not of the form Buyer-Seller");
    }
    const std::string_view b = trim(item.substr(0, dash));
    const std::string_view s = trim(item.substr(dash + 1));
    const auto bi = market.find_buyer(b);
    const auto sj = market.find_seller(s);
    if (!bi) throw SchemaError("unknown or ambiguous buyer '" + std::string(b) + "'");
    if (!sj) throw SchemaError("unknown or ambiguous seller '" + std::string(s) + "'");
    m.match(*bi, *sj);
  }
  return m;
}

std::vector<double> parse_prices(const Market& market, std::string_view text) {
  std::vector<double> prices;
  if (!trim(text).empty()) {
    for (std::string_view item : split(text, ',')) {
      std::size_t used = 0;
      const std::string token(item);
      double value = 0.0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != token.size()) {
        throw SchemaError("price '" + token + "' is not a number");
      }
      prices.push_back(value);
    }
  }
  if (prices.size() != market.num_sellers()) {
    throw SchemaError("expected " + std::to_string(market.num_sellers()) +
                      " prices, got " + std::to_string(prices.size()));
  }
  return prices;
}

}  // namespace stablematch
