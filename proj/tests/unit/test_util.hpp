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

#ifndef STABLEMATCH_TESTS_TEST_UTIL_HPP_
#define STABLEMATCH_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <numeric>
#include <vector>

#include "stablematch/market.hpp"
#include "stablematch/random_source.hpp"

namespace stablematch::testing {

// Integer surpluses in [0, max_value] on a market with at most max_side
// agents per side.
inline Market random_small_market(SeededSource& rng, std::size_t max_side, int max_value,
                                  bool with_costs = false) {
  const std::size_t n = 1 + rng.choice(max_side);
  const std::size_t m = 1 + rng.choice(max_side);
  Matrix h(n, m, 0.0);
  std::vector<double> c(m, 0.0);
  if (with_costs) {
    for (double& x : c) x = static_cast<double>(rng.choice(6));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      h(i, j) = c[j] + static_cast<double>(rng.choice(static_cast<std::size_t>(max_value) + 1));
    }
  }
  std::vector<std::string> b;
  std::vector<std::string> s;
  for (std::size_t i = 0; i < n; ++i) b.push_back("b" + std::to_string(i));
  for (std::size_t j = 0; j < m; ++j) s.push_back("s" + std::to_string(j));
  return Market(b, s, h, c);
}

// Uniformly shuffled partial matching: each buyer takes a random free seller
// or stays single.
inline Matching random_matching(SeededSource& rng, const Market& market) {
  Matching mu(market.num_buyers(), market.num_sellers());
  std::vector<std::size_t> free_sellers(market.num_sellers());
  std::iota(free_sellers.begin(), free_sellers.end(), 0);
  for (std::size_t i = 0; i < market.num_buyers(); ++i) {
    const std::size_t k = rng.choice(free_sellers.size() + 1);
    if (k == free_sellers.size()) continue;
    mu.match(i, free_sellers[k]);
    free_sellers.erase(free_sellers.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return mu;
}

// Prices anywhere in [c_j - 3, h_max + 3], integers and halves.
inline std::vector<double> random_prices(SeededSource& rng, const Market& market) {
  std::vector<double> p(market.num_sellers());
  for (std::size_t j = 0; j < p.size(); ++j) {
    double top = market.costs()[j];
    for (std::size_t i = 0; i < market.num_buyers(); ++i) {
      top = std::max(top, market.valuations()(i, j));
    }
    const double lo = market.costs()[j] - 3.0;
    const auto steps = static_cast<std::size_t>(2.0 * (top + 3.0 - lo)) + 1;
    p[j] = lo + 0.5 * static_cast<double>(rng.choice(steps));
  }
  return p;
}

// Every matching of the market, each once.
template <typename Fn>
void for_each_full_matching(const Market& market, Fn&& fn) {
  Matching mu(market.num_buyers(), market.num_sellers());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == market.num_buyers()) {
      fn(static_cast<const Matching&>(mu));
      return;
    }
    self(self, i + 1);
    for (std::size_t j = 0; j < market.num_sellers(); ++j) {
      if (mu.seller_matched(j)) continue;
      mu.match(i, j);
      self(self, i + 1);
      mu.unmatch_buyer(i);
    }
  };
  rec(rec, 0);
}

inline double brute_force_opt(const Market& market) {
  double best = 0.0;
  for_each_full_matching(market, [&](const Matching& mu) {
    best = std::max(best, social_welfare(market, mu));
  });
  return best;
}

}  // namespace stablematch::testing

#endif  // STABLEMATCH_TESTS_TEST_UTIL_HPP_
