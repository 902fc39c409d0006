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

#include "stablematch/matching_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stablematch {
namespace {

// Min-cost perfect assignment on a square matrix (Kuhn-Munkres with
// potentials). row_pot[i] + col_pot[j] <= cost(i, j) everywhere, with
// equality on the assignment.
struct SquareAssignment {
  std::vector<std::size_t> col_of_row;
  std::vector<double> row_pot;
  std::vector<double> col_pot;
};

SquareAssignment solve_square(const Matrix& cost) {
  const std::size_t n = cost.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based; index 0 is the virtual root of each augmenting search.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_at(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_at[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_at[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_at[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_at[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_at[j0] = row_at[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  SquareAssignment out;
  out.col_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.col_of_row[row_at[j] - 1] = j - 1;
  out.row_pot.assign(u.begin() + 1, u.end());
  out.col_pot.assign(v.begin() + 1, v.end());
  return out;
}

// Negated, zero-padded square cost matrix for maximising max(w, 0).
Matrix padded_cost(const Matrix& w) {
  const std::size_t n = std::max(w.rows(), w.cols());
  Matrix cost(n, n, 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      cost(i, j) = -std::max(w(i, j), 0.0);
    }
  }
  return cost;
}

void check_weights(const Matrix& w) {
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      if (!std::isfinite(w(i, j))) {
        throw DomainError("matching weights must be finite");
      }
    }
  }
}

// Value of the best matching on rows [first_row, rows) avoiding used columns.
double residual_value(const Matrix& w, std::size_t first_row,
                      const std::vector<bool>& col_used) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    if (!col_used[j]) cols.push_back(j);
  }
  if (first_row >= w.rows() || cols.empty()) return 0.0;
  Matrix sub(w.rows() - first_row, cols.size());
  for (std::size_t i = first_row; i < w.rows(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      sub(i - first_row, k) = w(i, cols[k]);
    }
  }
  return max_weight_value(sub);
}

}  // namespace

double max_weight_value(const Matrix& weights) {
  check_weights(weights);
  if (weights.rows() == 0 || weights.cols() == 0) return 0.0;
  const SquareAssignment sol = solve_square(padded_cost(weights));
  double value = 0.0;
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    const std::size_t j = sol.col_of_row[i];
    if (j < weights.cols()) value += std::max(weights(i, j), 0.0);
  }
  return value;
}

MatchingResult max_weight_matching(const Matrix& weights) {
  check_weights(weights);
  const std::size_t n = weights.rows();
  const std::size_t m = weights.cols();
  MatchingResult out{Matching(n, m), 0.0, std::vector<double>(n, 0.0),
                     std::vector<double>(m, 0.0)};
  if (n == 0 || m == 0) return out;

  const SquareAssignment sol = solve_square(padded_cost(weights));
  double opt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = sol.col_of_row[i];
    if (j < m) opt += std::max(weights(i, j), 0.0);
  }

  // Potentials of the max problem, shifted so that padding agents (or, in
  // the square case, the cheapest seller) sit at zero. This makes both sides
  // non-negative while keeping alpha_i + beta_j >= max(w_ij, 0).
  const std::size_t size = std::max(n, m);
  std::vector<double> alpha(size), beta(size);
  for (std::size_t k = 0; k < size; ++k) {
    alpha[k] = -sol.row_pot[k];
    beta[k] = -sol.col_pot[k];
  }
  double shift = 0.0;  // added to beta, removed from alpha
  if (n < m) {
    shift = alpha[n];
  } else if (n > m) {
    shift = -beta[m];
  } else {
    shift = -*std::min_element(beta.begin(), beta.end());
  }
  const double scale = std::max(1.0, std::abs(opt));
  for (std::size_t i = 0; i < n; ++i) {
    const double a = alpha[i] - shift;
    out.alpha[i] = a < 0.0 && a > -kTolerance * scale ? 0.0 : a;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double b = beta[j] + shift;
    out.beta[j] = b < 0.0 && b > -kTolerance * scale ? 0.0 : b;
  }

  // Lexicographically smallest optimal pair list: walk buyers in order and
  // keep the first seller that still allows an optimal completion.
  const double tol = kTolerance * scale;
  std::vector<bool> col_used(m, false);
  double fixed_value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (col_used[j] || weights(i, j) <= 0.0) continue;
      col_used[j] = true;
      const double total =
          fixed_value + weights(i, j) + residual_value(weights, i + 1, col_used);
      if (total >= opt - tol) {
        out.matching.match(i, j);
        fixed_value += weights(i, j);
        break;
      }
      col_used[j] = false;
    }
  }
  out.value = fixed_value;

  // Unmatched agents carry zero potential in every optimal dual; snap the
  // floating-point residue.
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.matching.buyer_matched(i) && std::abs(out.alpha[i]) <= tol) {
      out.alpha[i] = 0.0;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!out.matching.seller_matched(j) && std::abs(out.beta[j]) <= tol) {
      out.beta[j] = 0.0;
    }
  }
  return out;
}

double optimal_value(const Market& market) {
  return max_weight_value(market.surplus());
}

UtilityProfile core_point(const Market& market) {
  MatchingResult r = max_weight_matching(market.surplus());
  return {std::move(r.alpha), std::move(r.beta)};
}

}  // namespace stablematch
