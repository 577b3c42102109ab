/*
 * Copyright 2026 The mklrt authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mklrt/linprog.hpp"

#include <cmath>
#include <limits>

#include "mklrt/errors.hpp"

namespace mklrt {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-11;
constexpr double kFeasTol = 1e-8;

// Tableau layout: rows 0..m-1 are constraints, row m is the cost row.
// Columns 0..n-1 are variables, column n is the RHS (negated objective
// in the cost row). basis[r] holds the basic column of constraint row r.
struct Tableau {
  Matrix t;
  std::vector<Index> basis;

  Index rows() const { return t.rows() - 1; }
  Index cols() const { return t.cols() - 1; }

  void pivot(Index row, Index col) {
    t.row(row) /= t(row, col);
    for (Index r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double factor = t(r, col);
      if (factor != 0.0) t.row(r) -= factor * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  Vector extract(Index n_orig) const {
    Vector x = Vector::Zero(n_orig);
    for (Index r = 0; r < rows(); ++r) {
      const Index col = basis[static_cast<std::size_t>(r)];
      if (col < n_orig) x[col] = t(r, cols());
    }
    return x;
  }
};

// Bland's rule: entering = lowest-index column with negative reduced
// cost, leaving = lowest-index row among minimal ratios. Returns
// LpStatus::optimal or LpStatus::unbounded.
template <typename OnVertex>
LpStatus run_simplex(Tableau& tab, Index active_cols, OnVertex&& on_vertex) {
  const Index m = tab.rows();
  for (;;) {
    Index enter = -1;
    for (Index j = 0; j < active_cols; ++j) {
      if (tab.t(m, j) < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return LpStatus::optimal;

    Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index r = 0; r < m; ++r) {
      const double a = tab.t(r, enter);
      if (a > kPivotTol) {
        const double ratio = tab.t(r, tab.cols()) / a;
        if (ratio < best_ratio - kCostTol ||
            (ratio < best_ratio + kCostTol &&
             (leave < 0 || tab.basis[static_cast<std::size_t>(r)] <
                               tab.basis[static_cast<std::size_t>(leave)]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) return LpStatus::unbounded;
    tab.pivot(leave, enter);
    on_vertex(tab);
  }
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const Index n = problem.c.size();
  const Index m_ub = problem.a_ub.rows();
  const Index m_eq = problem.a_eq.rows();
  const Index m = m_ub + m_eq;
  if (n < 1) throw validation_error("LP needs at least one variable");
  if ((m_ub > 0 && problem.a_ub.cols() != n) || (m_eq > 0 && problem.a_eq.cols() != n)) {
    throw validation_error("LP constraint matrices disagree with variable count");
  }
  if (problem.b_ub.size() != m_ub || problem.b_eq.size() != m_eq) {
    throw validation_error("LP right-hand sides disagree with row counts");
  }

  // Columns: n original | m_ub slacks | up to m artificials | RHS.
  const Index slack0 = n;
  const Index art0 = n + m_ub;
  Tableau tab;
  tab.t = Matrix::Zero(m + 1, art0 + m + 1);
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  const Index rhs = tab.t.cols() - 1;

  Index n_art = 0;
  std::vector<Index> art_rows;
  for (Index r = 0; r < m; ++r) {
    double b;
    if (r < m_ub) {
      tab.t.row(r).head(n) = problem.a_ub.row(r);
      tab.t(r, slack0 + r) = 1.0;
      b = problem.b_ub[r];
    } else {
      tab.t.row(r).head(n) = problem.a_eq.row(r - m_ub);
      b = problem.b_eq[r - m_ub];
    }
    if (b < 0.0) {
      tab.t.row(r) = -tab.t.row(r);
      b = -b;
    }
    tab.t(r, rhs) = b;
    // Slack columns with +1 can start basic; everything else gets an
    // artificial variable.
    if (r < m_ub && tab.t(r, slack0 + r) == 1.0) {
      tab.basis[static_cast<std::size_t>(r)] = slack0 + r;
    } else {
      tab.t(r, art0 + n_art) = 1.0;
      tab.basis[static_cast<std::size_t>(r)] = art0 + n_art;
      art_rows.push_back(r);
      ++n_art;
    }
  }

  LpSolution out;

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (Index j = art0; j < art0 + n_art; ++j) tab.t(m, j) = 1.0;
    for (Index r : art_rows) tab.t.row(m) -= tab.t.row(r);
    const LpStatus st = run_simplex(tab, art0 + n_art, [](const Tableau&) {});
    if (st == LpStatus::unbounded || tab.t(m, rhs) < -kFeasTol) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // Pivot any artificial still basic (at zero level) out of the basis;
    // a row with no eligible pivot is redundant and can be neutralized.
    for (Index r = 0; r < m; ++r) {
      if (tab.basis[static_cast<std::size_t>(r)] < art0) continue;
      Index col = -1;
      for (Index j = 0; j < art0; ++j) {
        if (std::abs(tab.t(r, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
      } else {
        tab.t.row(r).setZero();
      }
    }
  }

  // Phase 2: restore the real objective, priced out over the basis.
  tab.t.row(m).setZero();
  tab.t.row(m).head(n) = problem.c.transpose();
  for (Index j = art0; j < art0 + n_art; ++j) tab.t.col(j).setZero();
  for (Index r = 0; r < m; ++r) {
    const Index col = tab.basis[static_cast<std::size_t>(r)];
    if (col >= 0 && std::abs(tab.t(m, col)) > 0.0) {
      tab.t.row(m) -= tab.t(m, col) * tab.t.row(r);
    }
  }

  out.visited.emplace_back(tab.extract(n), -tab.t(m, rhs));
  const LpStatus st = run_simplex(tab, art0, [&](const Tableau& cur) {
    out.visited.emplace_back(cur.extract(n), -cur.t(m, rhs));
  });
  if (st == LpStatus::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.x = tab.extract(n);
  out.objective = -tab.t(m, rhs);
  return out;
}

}  // namespace mklrt
