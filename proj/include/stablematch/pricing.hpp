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

#ifndef STABLEMATCH_PRICING_HPP_
#define STABLEMATCH_PRICING_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "stablematch/market.hpp"

namespace stablematch {

enum class PricePolicyTag { kShapleyShubik, kHalf, kMinSi, kCustom };

struct PricePolicy {
  PricePolicyTag tag = PricePolicyTag::kHalf;
  std::vector<double> custom_prices;  // kCustom only
};

std::optional<PricePolicyTag> parse_price_policy(std::string_view name);
std::string_view to_string(PricePolicyTag tag);

// Optimal matching priced at beta_j + c_j from the solver's dual; stable.
Allocation shapley_shubik_prices(const Market& market);

// Every matched pair splits its surplus evenly: p_j = c_j + a_ij / 2.
Allocation half_prices(const Market& market, const Matching& matching);

// Prices minimising subset instability for a fixed matching; the result is
// individually rational and its SI equals OPT - SW(matching).
Allocation min_si_prices(const Market& market, const Matching& matching);

// Projects each matched seller's price onto [c_j, h_{mu_j, j}] and resets
// unmatched sellers to c_j. Never increases subset instability.
Allocation clamp_prices_ir(const Market& market, const Allocation& alloc);

// Dispatches on policy.tag. kShapleyShubik requires `matching` to be
// optimal and prices it with the solver's dual.
Allocation apply_price_policy(const Market& market, const Matching& matching,
                              const PricePolicy& policy);

}  // namespace stablematch

#endif  // STABLEMATCH_PRICING_HPP_
