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

#ifndef MKLRT_ORACLE_HPP
#define MKLRT_ORACLE_HPP

#include <vector>

#include "mklrt/types.hpp"

namespace mklrt {

/// All lattice points of the weight simplex with coordinates that are
/// multiples of step, in lexicographic order. step must divide 1.
std::vector<SimplexWeights> grid_simplex(int num_kernels, double step);

/// The ratio-trace value attained at fixed weights: combine, solve the
/// pencil, sum the positive eigenvalues. Deliberately goes through the
/// plain GEVD path so it is independent of the SILP machinery it checks.
double objective_at_mu(const SimplexWeights& mu, const std::vector<KernelMatrix>& kernels,
                       const Matrix& l, const Matrix& lp, double sigma);

struct BruteForceRow {
  Vector mu;
  double objective = 0.0;
};

struct BruteForceResult {
  SimplexWeights best_mu{Vector::Ones(1)};
  double best_objective = 0.0;
  std::vector<BruteForceRow> table;  // grid order
};

/// Exhaustive search over the simplex grid. Ties go to the
/// lexicographically smallest weights; the full table comes back for
/// inspection or CSV dumps. Grid points are evaluated in parallel.
BruteForceResult brute_force_mkl(const std::vector<KernelMatrix>& kernels,
                                 const Matrix& l, const Matrix& lp, double sigma,
                                 double step);

}  // namespace mklrt

#endif  // MKLRT_ORACLE_HPP
