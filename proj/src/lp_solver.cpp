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

#include "stablematch/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "stablematch/errors.hpp"

namespace stablematch {
namespace {

constexpr double kPivotEps = 1e-10;
constexpr std::size_t kMaxPivots = 200000;

// Tableau in canonical form for the basis; reduced[j] holds c_j - c_B B^-1 A_j.
class Tableau {
 public:
  Tableau(std::vector<std::vector<double>> rows, std::vector<double> rhs,
          std::vector<std::size_t> basis, std::size_t num_cols)
      : rows_(std::move(rows)),
        rhs_(std::move(rhs)),
        basis_(std::move(basis)),
        num_cols_(num_cols) {}

  // Installs a cost vector and recomputes reduced costs for the basis.
  void set_costs(const std::vector<double>& cost) {
    cost_ = cost;
    reduced_ = cost;
    objective_ = 0.0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < num_cols_; ++j) reduced_[j] -= cb * rows_[r][j];
      objective_ += cb * rhs_[r];
    }
  }

  // Runs Bland's rule until optimal or unbounded. Columns with
  // allowed[j] == false never enter.
  LpStatus optimize(const std::vector<bool>& allowed) {
    for (std::size_t it = 0; it < kMaxPivots; ++it) {
      std::size_t enter = num_cols_;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        if (allowed[j] && reduced_[j] < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == num_cols_) return LpStatus::kOptimal;
      std::size_t leave = rows_.size();
      double best = 0.0;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        const double coef = rows_[r][enter];
        if (coef <= kPivotEps) continue;
        const double ratio = rhs_[r] / coef;
        if (leave == rows_.size() || ratio < best - kPivotEps ||
            (ratio <= best + kPivotEps && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_.size()) return LpStatus::kUnbounded;
      pivot(leave, enter);
    }
    throw Error("simplex exceeded its pivot budget");
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = rows_[r][c];
    for (double& x : rows_[r]) x /= p;
    rhs_[r] /= p;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (k == r) continue;
      const double f = rows_[k][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < num_cols_; ++j) rows_[k][j] -= f * rows_[r][j];
      rhs_[k] -= f * rhs_[r];
      if (rhs_[k] < 0.0 && rhs_[k] > -kPivotEps) rhs_[k] = 0.0;
    }
    const double f = reduced_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j < num_cols_; ++j) reduced_[j] -= f * rows_[r][j];
      objective_ += f * rhs_[r];
    }
    basis_[r] = c;
  }

  double objective() const { return objective_; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t basic(std::size_t r) const { return basis_[r]; }
  double rhs(std::size_t r) const { return rhs_[r]; }
  double at(std::size_t r, std::size_t c) const { return rows_[r][c]; }

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<std::size_t> basis_;
  std::size_t num_cols_;
  std::vector<double> cost_;
  std::vector<double> reduced_;
  double objective_ = 0.0;
};

void check_shape(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  const std::size_t r = lp.senses.size();
  if (lp.rhs.size() != r) {
    throw StructuralError("LP has " + std::to_string(r) + " senses but " +
                          std::to_string(lp.rhs.size()) + " right-hand sides");
  }
  if (r > 0 && (lp.constraints.rows() != r || lp.constraints.cols() != n)) {
    throw StructuralError("LP constraint matrix is " +
                          std::to_string(lp.constraints.rows()) + "x" +
                          std::to_string(lp.constraints.cols()) + ", expected " +
                          std::to_string(r) + "x" + std::to_string(n));
  }
  if (!lp.free.empty() && lp.free.size() != n) {
    throw StructuralError("LP free-variable mask has the wrong length");
  }
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(lp.objective.begin(), lp.objective.end(), finite) ||
      !std::all_of(lp.rhs.begin(), lp.rhs.end(), finite)) {
    throw DomainError("LP data must be finite");
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(lp.constraints(i, j))) {
        throw DomainError("LP data must be finite");
      }
    }
  }
}

}  // namespace

void LinearProgram::add_constraint(const std::vector<double>& row, Sense sense,
                                   double bound) {
  if (row.size() != objective.size()) {
    throw StructuralError("constraint row has " + std::to_string(row.size()) +
                          " coefficients, expected " +
                          std::to_string(objective.size()));
  }
  std::vector<std::vector<double>> all =
      constraints.rows() == 0 ? std::vector<std::vector<double>>{}
                              : constraints.to_rows();
  all.push_back(row);
  constraints = Matrix::from_rows(all);
  senses.push_back(sense);
  rhs.push_back(bound);
}

LpSolution solve(const LinearProgram& lp) {
  check_shape(lp);
  const std::size_t n = lp.num_variables();
  const std::size_t r = lp.senses.size();

  // Split free variables into positive and negative parts.
  std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t k = 0; k < n; ++k) {
    pos_col[k] = ncols++;
    if (!lp.free.empty() && lp.free[k]) neg_col[k] = ncols++;
  }
  const std::size_t structural = ncols;

  std::size_t num_slack = 0, num_art = 0;
  std::vector<Sense> sense(lp.senses);
  std::vector<double> rhs(lp.rhs);
  std::vector<double> sign(r, 1.0);
  for (std::size_t i = 0; i < r; ++i) {
    if (rhs[i] < 0.0) {
      sign[i] = -1.0;
      rhs[i] = -rhs[i];
      if (sense[i] == Sense::kLessEqual) {
        sense[i] = Sense::kGreaterEqual;
      } else if (sense[i] == Sense::kGreaterEqual) {
        sense[i] = Sense::kLessEqual;
      }
    }
    if (sense[i] != Sense::kEqual) ++num_slack;
    if (sense[i] != Sense::kLessEqual) ++num_art;
  }
  const std::size_t total = structural + num_slack + num_art;
  const std::size_t first_art = structural + num_slack;

  std::vector<std::vector<double>> rows(r, std::vector<double>(total, 0.0));
  std::vector<std::size_t> basis(r);
  std::size_t next_slack = structural, next_art = first_art;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double a = sign[i] * lp.constraints(i, k);
      rows[i][pos_col[k]] = a;
      if (neg_col[k] != SIZE_MAX) rows[i][neg_col[k]] = -a;
    }
    switch (sense[i]) {
      case Sense::kLessEqual:
        rows[i][next_slack] = 1.0;
        basis[i] = next_slack++;
        break;
      case Sense::kGreaterEqual:
        rows[i][next_slack++] = -1.0;
        rows[i][next_art] = 1.0;
        basis[i] = next_art++;
        break;
      case Sense::kEqual:
        rows[i][next_art] = 1.0;
        basis[i] = next_art++;
        break;
    }
  }

  Tableau tab(std::move(rows), std::move(rhs), std::move(basis), total);
  double scale = 1.0;
  for (double b : lp.rhs) scale = std::max(scale, std::abs(b));

  // Phase 1: drive the artificial variables to zero.
  if (num_art > 0) {
    std::vector<double> phase1(total, 0.0);
    for (std::size_t j = first_art; j < total; ++j) phase1[j] = 1.0;
    tab.set_costs(phase1);
    tab.optimize(std::vector<bool>(total, true));
    if (tab.objective() > 1e-9 * scale) return {LpStatus::kInfeasible, 0.0, {}};
    for (std::size_t i = 0; i < tab.num_rows(); ++i) {
      if (tab.basic(i) < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2.
  std::vector<double> cost(total, 0.0);
  const double dir = lp.maximize ? -1.0 : 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    cost[pos_col[k]] = dir * lp.objective[k];
    if (neg_col[k] != SIZE_MAX) cost[neg_col[k]] = -dir * lp.objective[k];
  }
  tab.set_costs(cost);
  std::vector<bool> allowed(total, true);
  for (std::size_t j = first_art; j < total; ++j) allowed[j] = false;
  if (tab.optimize(allowed) == LpStatus::kUnbounded) {
    return {LpStatus::kUnbounded, 0.0, {}};
  }

  std::vector<double> col_value(total, 0.0);
  for (std::size_t i = 0; i < tab.num_rows(); ++i) {
    col_value[tab.basic(i)] = tab.rhs(i);
  }
  LpSolution out{LpStatus::kOptimal, 0.0, std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    out.x[k] = col_value[pos_col[k]];
    if (neg_col[k] != SIZE_MAX) out.x[k] -= col_value[neg_col[k]];
    out.value += lp.objective[k] * out.x[k];
  }
  return out;
}

Subsidy minimum_stabilizing_subsidy(const Market& market, const Allocation& alloc) {
  const UtilityProfile util = utilities(market, alloc);
  const std::size_t n = market.num_buyers();
  const std::size_t m = market.num_sellers();
  LinearProgram lp;
  lp.objective.assign(n + m, 1.0);
  std::vector<std::vector<double>> rows;
  auto unit_row = [&](std::size_t k) {
    std::vector<double> row(n + m, 0.0);
    row[k] = 1.0;
    return row;
  };
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(unit_row(i));
    lp.senses.push_back(Sense::kGreaterEqual);
    lp.rhs.push_back(-util.u[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    rows.push_back(unit_row(n + j));
    lp.senses.push_back(Sense::kGreaterEqual);
    lp.rhs.push_back(-util.v[j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> row(n + m, 0.0);
      row[i] = 1.0;
      row[n + j] = 1.0;
      rows.push_back(std::move(row));
      lp.senses.push_back(Sense::kGreaterEqual);
      lp.rhs.push_back(market.surplus(i, j) - util.u[i] - util.v[j]);
    }
  }
  lp.constraints = rows.empty() ? Matrix(0, n + m) : Matrix::from_rows(rows);
  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw Error("stabilizing subsidy LP did not reach an optimum");
  }
  Subsidy out;
  out.value = sol.value;
  out.tau.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
  out.eta.assign(sol.x.begin() + static_cast<std::ptrdiff_t>(n), sol.x.end());
  return out;
}

}  // namespace stablematch
