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

#ifndef STABLEMATCH_STABILITY_HPP_
#define STABLEMATCH_STABILITY_HPP_

#include <cstddef>
#include <optional>
#include <span>

#include "stablematch/market.hpp"

namespace stablematch {

// Largest agent count per side accepted by the enumeration oracles.
inline constexpr std::size_t kOracleMaxSide = 4;

// lambda: SW(matching) / OPT, or 1 when OPT is 0.
double optimality_ratio(const Market& market, const Matching& matching);

// Subset instability: the largest welfare gap any sub-coalition could close
// by rematching among itself. Computed as a max-weight matching on
// adjusted surpluses; always >= 0.
double subset_instability(const Market& market, const Allocation& alloc);

// Same quantity for arbitrary utility vectors (e.g. expected utilities).
double subset_instability(const Market& market, std::span<const double> u,
                          std::span<const double> v);

// 1 - SI / OPT, or 1 when OPT is 0.
double stability_index(const Market& market, const Allocation& alloc);

// Minimum over positive-surplus pairs of (u_i + v_j) / a_ij without any cap
// or IR check; nullopt when no pair has positive surplus.
std::optional<double> kappa_raw(const Market& market, std::span<const double> u,
                                std::span<const double> v);

// Approximate-core factor of an individually rational allocation, capped at
// 1. Throws DomainError naming the first agent with negative utility.
std::optional<double> kappa(const Market& market, const Allocation& alloc);

// Definitional oracles. Both enumerate every sub-market and every matching
// inside it and throw CapacityError above kOracleMaxSide agents per side.
double brute_force_si(const Market& market, const Allocation& alloc);
double brute_force_si(const Market& market, std::span<const double> u,
                      std::span<const double> v);
// Minimum of restricted welfare over rematched welfare across sub-markets;
// nullopt when no sub-market has positive rematched welfare. Uncapped.
std::optional<double> kappa_submarket_oracle(const Market& market,
                                             const Allocation& alloc);

struct MetricReport {
  double opt = 0.0;
  double social_welfare = 0.0;
  double lambda = 1.0;
  double si = 0.0;
  double norm_si = 1.0;
  std::optional<double> kappa;      // capped at 1; nullopt if undefined or not IR
  std::optional<double> kappa_raw;  // uncapped, IR not required
  bool individually_rational = true;
};

MetricReport evaluate_metrics(const Market& market, const Allocation& alloc);

}  // namespace stablematch

#endif  // STABLEMATCH_STABILITY_HPP_
