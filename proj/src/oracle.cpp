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

#include "mklrt/oracle.hpp"

#include <cmath>
#include <functional>

#include "mklrt/errors.hpp"
#include "mklrt/kernel_ops.hpp"
#include "mklrt/parallel.hpp"
#include "mklrt/ratio_trace.hpp"

namespace mklrt {

std::vector<SimplexWeights> grid_simplex(int num_kernels, double step) {
  if (num_kernels < 1) throw validation_error("need at least one kernel");
  if (!(step > 0.0 && step <= 1.0)) throw validation_error("step must be in (0, 1]");
  const double ticks_real = 1.0 / step;
  const long ticks = std::lround(ticks_real);
  if (std::abs(ticks_real - static_cast<double>(ticks)) > 1e-12 * ticks_real) {
    throw validation_error("step must divide 1");
  }

  // Enumerate compositions of `ticks` into num_kernels nonnegative parts,
  // lexicographically.
  std::vector<SimplexWeights> out;
  std::vector<long> parts(static_cast<std::size_t>(num_kernels), 0);
  const auto emit = [&] {
    Vector mu(num_kernels);
    for (int i = 0; i < num_kernels; ++i) {
      mu[i] = static_cast<double>(parts[static_cast<std::size_t>(i)]) /
              static_cast<double>(ticks);
    }
    // Exact sum: renormalize the tiny roundoff so the simplex invariant
    // holds without slack.
    mu /= mu.sum();
    out.push_back(SimplexWeights{std::move(mu)});
  };
  const std::function<void(int, long)> rec = [&](int pos, long remaining) {
    if (pos == num_kernels - 1) {
      parts[static_cast<std::size_t>(pos)] = remaining;
      emit();
      return;
    }
    for (long v = 0; v <= remaining; ++v) {
      parts[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, remaining - v);
    }
  };
  rec(0, ticks);
  return out;
}

double objective_at_mu(const SimplexWeights& mu, const std::vector<KernelMatrix>& kernels,
                       const Matrix& l, const Matrix& lp, double sigma) {
  const KernelMatrix combined = combine(mu, kernels);
  const auto inst = make_ratio_trace_instance(combined, l, lp, sigma);
  return solve_gevd_pencil(inst).objective;
}

BruteForceResult brute_force_mkl(const std::vector<KernelMatrix>& kernels,
                                 const Matrix& l, const Matrix& lp, double sigma,
                                 double step) {
  const std::vector<SimplexWeights> grid =
      grid_simplex(static_cast<int>(kernels.size()), step);

  BruteForceResult result;
  result.table.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    result.table[i].mu = grid[i].mu;
    result.table[i].objective = objective_at_mu(grid[i], kernels, l, lp, sigma);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    if (result.table[i].objective > result.table[best].objective) best = i;
    // Grid order is lexicographic, so the first maximum already is the
    // lexicographically smallest tie.
  }
  result.best_mu = SimplexWeights{result.table[best].mu};
  result.best_objective = result.table[best].objective;
  return result;
}

}  // namespace mklrt
