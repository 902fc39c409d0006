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

#include "stablematch/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stablematch/errors.hpp"
#include "stablematch/lp_solver.hpp"
#include "stablematch/matching_solver.hpp"

namespace stablematch {

std::optional<PricePolicyTag> parse_price_policy(std::string_view name) {
  if (name == "shapley-shubik" || name == "shapley_shubik") {
    return PricePolicyTag::kShapleyShubik;
  }
  if (name == "half") return PricePolicyTag::kHalf;
  if (name == "min-si" || name == "min_si") return PricePolicyTag::kMinSi;
  if (name == "custom") return PricePolicyTag::kCustom;
  return std::nullopt;
}

std::string_view to_string(PricePolicyTag tag) {
  switch (tag) {
    case PricePolicyTag::kShapleyShubik: return "shapley-shubik";
    case PricePolicyTag::kHalf: return "half";
    case PricePolicyTag::kMinSi: return "min-si";
    case PricePolicyTag::kCustom: return "custom";
  }
  return "?";
}

Allocation shapley_shubik_prices(const Market& market) {
  const MatchingResult r = max_weight_matching(market.surplus());
  Allocation alloc = allocation_at_cost(market, r.matching);
  for (const auto& [i, j] : r.matching.pairs()) {
    alloc.prices[j] = r.beta[j] + market.costs()[j];
  }
  return alloc;
}

Allocation half_prices(const Market& market, const Matching& matching) {
  Allocation alloc = allocation_at_cost(market, matching);
  for (const auto& [i, j] : matching.pairs()) {
    alloc.prices[j] = market.costs()[j] + 0.5 * market.surplus(i, j);
  }
  return alloc;
}

Allocation clamp_prices_ir(const Market& market, const Allocation& alloc) {
  check_fits(market, alloc);
  Allocation out = allocation_at_cost(market, alloc.matching);
  for (const auto& [i, j] : alloc.matching.pairs()) {
    if (market.surplus(i, j) < -kTolerance) {
      throw DomainError("matched pair (" + market.buyer_ids()[i] + ", " +
                        market.seller_ids()[j] + ") has negative surplus");
    }
    out.prices[j] = std::clamp(alloc.prices[j], market.costs()[j],
                               market.valuations()(i, j));
  }
  return out;
}

Allocation min_si_prices(const Market& market, const Matching& matching) {
  check_fits(market, matching);
  const std::size_t n = market.num_buyers();
  const std::size_t m = market.num_sellers();
  const Matrix& h = market.valuations();
  const std::vector<double>& c = market.costs();

  // Variables: [price of each matched seller (free) | tau (n) | eta (m)].
  // Unmatched agents keep zero utility, so their prices are not variables.
  std::vector<std::size_t> price_var(m, kUnmatched);
  std::size_t num_prices = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (matching.seller_matched(j)) price_var[j] = num_prices++;
  }
  const std::size_t tau0 = num_prices;
  const std::size_t eta0 = tau0 + n;
  const std::size_t nvars = eta0 + m;

  LinearProgram lp;
  lp.objective.assign(nvars, 0.0);
  for (std::size_t k = tau0; k < nvars; ++k) lp.objective[k] = 1.0;
  lp.free.assign(nvars, false);
  for (std::size_t k = 0; k < num_prices; ++k) lp.free[k] = true;

  std::vector<std::vector<double>> rows;
  auto push = [&](std::vector<double> row, double bound) {
    rows.push_back(std::move(row));
    lp.senses.push_back(Sense::kGreaterEqual);
    lp.rhs.push_back(bound);
  };
  // u_i + tau_i >= 0 with u_i = h_{i,mu_i} - p_{mu_i}.
  for (std::size_t i = 0; i < n; ++i) {
    if (!matching.buyer_matched(i)) continue;
    const std::size_t s = matching.seller_of(i);
    std::vector<double> row(nvars, 0.0);
    row[tau0 + i] = 1.0;
    row[price_var[s]] = -1.0;
    push(std::move(row), -h(i, s));
  }
  // v_j + eta_j >= 0 with v_j = p_j - c_j.
  for (std::size_t j = 0; j < m; ++j) {
    if (!matching.seller_matched(j)) continue;
    std::vector<double> row(nvars, 0.0);
    row[eta0 + j] = 1.0;
    row[price_var[j]] = 1.0;
    push(std::move(row), c[j]);
  }
  // u_i + tau_i + v_j + eta_j >= a_ij.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> row(nvars, 0.0);
      double bound = market.surplus(i, j);
      row[tau0 + i] = 1.0;
      row[eta0 + j] = 1.0;
      if (matching.buyer_matched(i)) {
        const std::size_t s = matching.seller_of(i);
        row[price_var[s]] -= 1.0;
        bound -= h(i, s);
      }
      if (matching.seller_matched(j)) {
        row[price_var[j]] += 1.0;
        bound += c[j];
      }
      push(std::move(row), bound);
    }
  }
  lp.constraints = rows.empty() ? Matrix(0, nvars) : Matrix::from_rows(rows);
  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw Error("price optimisation LP did not reach an optimum");
  }
  Allocation alloc = allocation_at_cost(market, matching);
  for (std::size_t j = 0; j < m; ++j) {
    if (price_var[j] != kUnmatched) alloc.prices[j] = sol.x[price_var[j]];
  }
  return clamp_prices_ir(market, alloc);
}

Allocation apply_price_policy(const Market& market, const Matching& matching,
                              const PricePolicy& policy) {
  switch (policy.tag) {
    case PricePolicyTag::kShapleyShubik: {
      check_fits(market, matching);
      const MatchingResult r = max_weight_matching(market.surplus());
      const double sw = social_welfare(market, matching);
      if (sw < r.value - kTolerance * std::max(1.0, r.value)) {
        throw ConfigError("shapley-shubik prices require an optimal matching");
      }
      Allocation alloc = allocation_at_cost(market, matching);
      for (const auto& [i, j] : matching.pairs()) {
        alloc.prices[j] = r.beta[j] + market.costs()[j];
      }
      return alloc;
    }
    case PricePolicyTag::kHalf:
      return half_prices(market, matching);
    case PricePolicyTag::kMinSi:
      return min_si_prices(market, matching);
    case PricePolicyTag::kCustom: {
      Allocation alloc{matching, policy.custom_prices};
      check_fits(market, alloc);
      return alloc;
    }
  }
  throw ConfigError("unknown price policy");
}

}  // namespace stablematch
