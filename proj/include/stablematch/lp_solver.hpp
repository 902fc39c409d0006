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

#ifndef STABLEMATCH_LP_SOLVER_HPP_
#define STABLEMATCH_LP_SOLVER_HPP_

#include <cstddef>
#include <vector>

#include "stablematch/market.hpp"
#include "stablematch/matrix.hpp"

namespace stablematch {

enum class Sense { kLessEqual, kGreaterEqual, kEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// minimize (or maximize) objective . x
// subject to constraints.row(r) . x  <sense[r]>  rhs[r]
//            x_k >= 0 unless free[k]
struct LinearProgram {
  std::vector<double> objective;
  Matrix constraints;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  std::vector<bool> free;  // empty means all variables are non-negative
  bool maximize = false;

  std::size_t num_variables() const { return objective.size(); }

  // Appends one constraint row.
  void add_constraint(const std::vector<double>& row, Sense sense, double bound);
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

// Dense two-phase simplex with Bland's rule.
LpSolution solve(const LinearProgram& lp);

struct Subsidy {
  double value = 0.0;
  std::vector<double> tau;  // buyers
  std::vector<double> eta;  // sellers
};

// Smallest total transfer (tau, eta) >= 0 that makes the allocation's
// utilities individually rational and blocking-pair free.
Subsidy minimum_stabilizing_subsidy(const Market& market, const Allocation& alloc);

}  // namespace stablematch

#endif  // STABLEMATCH_LP_SOLVER_HPP_
