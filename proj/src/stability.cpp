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

#include "stablematch/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "stablematch/errors.hpp"
#include "stablematch/matching_solver.hpp"

namespace stablematch {
namespace {

void check_profile(const Market& market, std::span<const double> u,
                   std::span<const double> v) {
  if (u.size() != market.num_buyers() || v.size() != market.num_sellers()) {
    throw StructuralError("utility vectors do not match the market size");
  }
}

void check_oracle_size(const Market& market) {
  if (market.num_buyers() > kOracleMaxSide || market.num_sellers() > kOracleMaxSide) {
    throw CapacityError("enumeration oracle is limited to " +
                        std::to_string(kOracleMaxSide) + " agents per side");
  }
}

// Calls visit(welfare) for every matching between the listed buyers and the
// sellers flagged in seller_mask, including the empty matching.
void for_each_matching(const Market& market, const std::vector<std::size_t>& buyers,
                       unsigned seller_mask,
                       const std::function<void(double)>& visit) {
  std::function<void(std::size_t, unsigned, double)> rec =
      [&](std::size_t k, unsigned free_sellers, double welfare) {
        if (k == buyers.size()) {
          visit(welfare);
          return;
        }
        rec(k + 1, free_sellers, welfare);
        for (std::size_t j = 0; j < market.num_sellers(); ++j) {
          if (free_sellers & (1u << j)) {
            rec(k + 1, free_sellers & ~(1u << j),
                welfare + market.surplus(buyers[k], j));
          }
        }
      };
  rec(0, seller_mask, 0.0);
}

// Calls visit(restricted_welfare, rematched_welfare) over every sub-market
// and every matching inside it.
void for_each_deviation(const Market& market, std::span<const double> u,
                        std::span<const double> v,
                        const std::function<void(double, double)>& visit) {
  const std::size_t n = market.num_buyers();
  const std::size_t m = market.num_sellers();
  for (unsigned bmask = 0; bmask < (1u << n); ++bmask) {
    std::vector<std::size_t> buyers;
    double restricted_buyers = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (bmask & (1u << i)) {
        buyers.push_back(i);
        restricted_buyers += u[i];
      }
    }
    for (unsigned smask = 0; smask < (1u << m); ++smask) {
      double restricted = restricted_buyers;
      for (std::size_t j = 0; j < m; ++j) {
        if (smask & (1u << j)) restricted += v[j];
      }
      for_each_matching(market, buyers, smask,
                        [&](double welfare) { visit(restricted, welfare); });
    }
  }
}

}  // namespace

double optimality_ratio(const Market& market, const Matching& matching) {
  const double opt = optimal_value(market);
  if (opt <= kTolerance) return 1.0;
  return social_welfare(market, matching) / opt;
}

double subset_instability(const Market& market, std::span<const double> u,
                          std::span<const double> v) {
  check_profile(market, u, v);
  const std::size_t n = market.num_buyers();
  const std::size_t m = market.num_sellers();
  // Agents with negative utility are worth adding to any coalition on their
  // own; the remaining gain comes from rematched pairs.
  double base = 0.0;
  std::vector<double> neg_u(n), neg_v(m);
  for (std::size_t i = 0; i < n; ++i) {
    neg_u[i] = std::max(0.0, -u[i]);
    base += neg_u[i];
  }
  for (std::size_t j = 0; j < m; ++j) {
    neg_v[j] = std::max(0.0, -v[j]);
    base += neg_v[j];
  }
  Matrix w(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      w(i, j) = market.surplus(i, j) - u[i] - v[j] - neg_u[i] - neg_v[j];
    }
  }
  return base + max_weight_value(w);
}

double subset_instability(const Market& market, const Allocation& alloc) {
  const UtilityProfile util = utilities(market, alloc);
  return subset_instability(market, util.u, util.v);
}

double stability_index(const Market& market, const Allocation& alloc) {
  const double opt = optimal_value(market);
  if (opt <= kTolerance) return 1.0;
  return 1.0 - subset_instability(market, alloc) / opt;
}

std::optional<double> kappa_raw(const Market& market, std::span<const double> u,
                                std::span<const double> v) {
  check_profile(market, u, v);
  std::optional<double> best;
  for (std::size_t i = 0; i < market.num_buyers(); ++i) {
    for (std::size_t j = 0; j < market.num_sellers(); ++j) {
      const double a = market.surplus(i, j);
      if (a <= kTolerance) continue;
      const double ratio = (u[i] + v[j]) / a;
      if (!best || ratio < *best) best = ratio;
    }
  }
  return best;
}

std::optional<double> kappa(const Market& market, const Allocation& alloc) {
  const UtilityProfile util = utilities(market, alloc);
  for (std::size_t i = 0; i < util.u.size(); ++i) {
    if (util.u[i] < -kTolerance) {
      throw DomainError("kappa requires an individually rational allocation; buyer " +
                        market.buyer_ids()[i] + " has utility " +
                        std::to_string(util.u[i]));
    }
  }
  for (std::size_t j = 0; j < util.v.size(); ++j) {
    if (util.v[j] < -kTolerance) {
      throw DomainError("kappa requires an individually rational allocation; seller " +
                        market.seller_ids()[j] + " has utility " +
                        std::to_string(util.v[j]));
    }
  }
  const auto raw = kappa_raw(market, util.u, util.v);
  if (!raw) return std::nullopt;
  return std::min(*raw, 1.0);
}

double brute_force_si(const Market& market, std::span<const double> u,
                      std::span<const double> v) {
  check_profile(market, u, v);
  check_oracle_size(market);
  double best = 0.0;  // empty coalition
  for_each_deviation(market, u, v, [&](double restricted, double welfare) {
    best = std::max(best, welfare - restricted);
  });
  return best;
}

double brute_force_si(const Market& market, const Allocation& alloc) {
  const UtilityProfile util = utilities(market, alloc);
  return brute_force_si(market, util.u, util.v);
}

std::optional<double> kappa_submarket_oracle(const Market& market,
                                             const Allocation& alloc) {
  check_oracle_size(market);
  const UtilityProfile util = utilities(market, alloc);
  std::optional<double> best;
  for_each_deviation(market, util.u, util.v, [&](double restricted, double welfare) {
    if (welfare <= kTolerance) return;
    const double ratio = restricted / welfare;
    if (!best || ratio < *best) best = ratio;
  });
  return best;
}

MetricReport evaluate_metrics(const Market& market, const Allocation& alloc) {
  const UtilityProfile util = utilities(market, alloc);
  MetricReport r;
  r.opt = optimal_value(market);
  r.social_welfare = social_welfare(market, alloc.matching);
  r.si = subset_instability(market, util.u, util.v);
  if (r.opt > kTolerance) {
    r.lambda = r.social_welfare / r.opt;
    r.norm_si = 1.0 - r.si / r.opt;
  }
  r.individually_rational =
      std::all_of(util.u.begin(), util.u.end(), [](double x) { return x >= -kTolerance; }) &&
      std::all_of(util.v.begin(), util.v.end(), [](double x) { return x >= -kTolerance; });
  r.kappa_raw = kappa_raw(market, util.u, util.v);
  if (r.individually_rational && r.kappa_raw) r.kappa = std::min(*r.kappa_raw, 1.0);
  return r;
}

}  // namespace stablematch
