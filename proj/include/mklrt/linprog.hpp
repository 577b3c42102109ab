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

#ifndef MKLRT_LINPROG_HPP
#define MKLRT_LINPROG_HPP

#include <vector>

#include "mklrt/types.hpp"

namespace mklrt {

/// minimize c^T x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
/// Either constraint block may be empty (0 rows, consistent column count).
struct LpProblem {
  Vector c;
  Matrix a_ub;
  Vector b_ub;
  Matrix a_eq;
  Vector b_eq;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  Vector x;
  double objective = 0.0;
  /// Basic feasible points visited during phase 2, including the final
  /// one, with their objective values. Lets callers apply their own
  /// tie-breaking among equally good vertices.
  std::vector<std::pair<Vector, double>> visited;
};

/// Dense two-phase primal simplex with Bland's rule, so the pivot path
/// (and therefore the returned vertex) is deterministic and the method
/// cannot cycle. Intended for small problems: the restricted masters
/// solved here have M+2 variables and at most a few hundred rows.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace mklrt

#endif  // MKLRT_LINPROG_HPP
