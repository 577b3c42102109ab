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

#include <doctest.h>

#include "mklrt/linprog.hpp"
#include "mklrt/random.hpp"
#include "testutil.hpp"

using namespace mklrt;

namespace {

LpProblem basic_2d() {
  // minimize -x - y  s.t. x + y <= 1, x <= 0.6, x,y >= 0
  LpProblem p;
  p.c = Vector(2);
  p.c << -1, -1;
  p.a_ub = Matrix(2, 2);
  p.a_ub << 1, 1, 1, 0;
  p.b_ub = Vector(2);
  p.b_ub << 1, 0.6;
  return p;
}

}  // namespace

TEST_CASE("lp: simple inequality problem") {
  const LpSolution s = solve_lp(basic_2d());
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.x.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp: equality constraint forces phase 1") {
  // minimize x1 s.t. x1 + x2 = 1 -> x = (0, 1)
  LpProblem p;
  p.c = Vector(2);
  p.c << 1, 0;
  p.a_eq = Matrix(1, 2);
  p.a_eq << 1, 1;
  p.b_eq = Vector::Ones(1);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp: infeasible and unbounded are detected") {
  LpProblem inf;
  inf.c = Vector::Ones(1);
  inf.a_ub = Matrix::Constant(1, 1, 1.0);
  inf.b_ub = Vector::Constant(1, -1.0);  // x <= -1 with x >= 0
  CHECK(solve_lp(inf).status == LpStatus::infeasible);

  LpProblem unb;
  unb.c = Vector::Constant(1, -1.0);  // minimize -x, x free upward
  unb.a_ub = Matrix::Zero(0, 1);
  unb.b_ub = Vector::Zero(0);
  CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("lp: negative right-hand sides are handled") {
  // minimize x s.t. -x <= -2  (x >= 2)
  LpProblem p;
  p.c = Vector::Ones(1);
  p.a_ub = Matrix::Constant(1, 1, -1.0);
  p.b_ub = Vector::Constant(1, -2.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lp: randomized agreement with enumeration of vertices") {
  // Small random LPs over the simplex: min c^T mu, sum mu = 1, mu >= 0.
  // The optimum must sit on a unit vertex, which is easy to enumerate.
  Rng rng(41);
  for (int rep = 0; rep < 25; ++rep) {
    const int m = 2 + static_cast<int>(rng.below(4));
    LpProblem p;
    p.c = Vector(m);
    for (int i = 0; i < m; ++i) p.c[i] = rng.gaussian();
    p.a_eq = Matrix::Ones(1, m);
    p.b_eq = Vector::Ones(1);
    const LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(p.c.minCoeff()).epsilon(1e-10));
  }
}

TEST_CASE("lp: determinism") {
  const LpSolution a = solve_lp(basic_2d());
  const LpSolution b = solve_lp(basic_2d());
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
}
