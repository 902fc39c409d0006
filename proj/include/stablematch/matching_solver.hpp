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

#ifndef STABLEMATCH_MATCHING_SOLVER_HPP_
#define STABLEMATCH_MATCHING_SOLVER_HPP_

#include <vector>

#include "stablematch/market.hpp"
#include "stablematch/matrix.hpp"

namespace stablematch {

// Optimal matching of the assignment LP together with an optimal solution of
// its dual: alpha_i + beta_j >= w_ij, alpha, beta >= 0, zero on unmatched
// agents, and sum(alpha) + sum(beta) == value.
struct MatchingResult {
  Matching matching;
  double value = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Maximum-weight (not necessarily perfect) bipartite matching. Entries <= 0
// never appear in the returned matching. Among optimal matchings the one
// whose buyer-ordered pair list is lexicographically smallest is returned.
MatchingResult max_weight_matching(const Matrix& weights);

// Value of the maximum-weight matching only; skips canonicalisation and duals.
double max_weight_value(const Matrix& weights);

// OPT: the optimal social welfare of the market.
double optimal_value(const Market& market);

// Dual potentials of the surplus matrix as a utility profile. The profile
// lies in the core (u_i + v_j >= a_ij with u, v >= 0) and sums to OPT.
UtilityProfile core_point(const Market& market);

}  // namespace stablematch

#endif  // STABLEMATCH_MATCHING_SOLVER_HPP_
