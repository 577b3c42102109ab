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

#ifndef MKLRT_SILP_HPP
#define MKLRT_SILP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "mklrt/instances.hpp"
#include "mklrt/ratio_trace.hpp"
#include "mklrt/types.hpp"

namespace mklrt {

struct SolverConfig {
  double sigma = 0.5;
  double epsilon = 1e-4;               // relative stopping gap
  int max_iters = 500;                 // T
  double rank_tol = kRankTol;          // tau for the eigen factorizations
  double selection_threshold = 1e-3;   // mu_m above this counts as selected
};

/// One row of the convergence trace.
struct SilpIterate {
  int iteration = 0;
  double zeta = 0.0;            // master value entering this iteration (+inf at t=1)
  double weighted_score = 0.0;  // sum_m mu_m S_m(eta*) at the current mu
  double gap = 0.0;             // |1 - weighted_score / zeta|
  Vector mu;
};

/// Column-generation state: the constraint set built so far (eta
/// matrices with their per-kernel scores), the current master optimum,
/// and the full trace.
struct SilpState {
  std::vector<Matrix> constraints;        // each l x l'
  std::vector<Vector> constraint_scores;  // per constraint: S_m over kernels
  SimplexWeights mu{Vector::Ones(1)};
  double zeta = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<SilpIterate> history;
};

/// Score of one base kernel against the constraint eta:
///   S_m(eta) = (1/sigma) sum_i [ eta_i^T eta_i / (4(1-sigma))
///            + eta_i^T G^T K^m G eta_i / (4 sigma)
///            - eta_i^T G^T K^m h_i ] + trace(K^m L')
/// where trace(K^m L') = sum_i h_i^T K^m h_i.
double eval_S_m(const Matrix& eta, const KernelMatrix& km, const PsdFactor& factor,
                double sigma);

/// The constraint most violated at the combined kernel K: column i of
/// eta* solves (I/(2(1-sigma)) + G^T K G/(2 sigma)) eta_i = G^T K h_i.
/// The system matrix is positive definite for sigma in (0,1).
Matrix most_violated_constraint(const KernelMatrix& k, const PsdFactor& factor,
                                double sigma);

/// Restricted master: maximize zeta subject to sum_m mu_m S_m >= zeta
/// for every stored constraint, mu on the simplex. Ties between optimal
/// vertices break to the lexicographically smallest mu encountered.
std::pair<SimplexWeights, double> solve_restricted_master(
    const std::vector<Vector>& scores);

/// The cutting-plane loop: start from uniform mu and zeta = +inf, add
/// the most violated constraint and re-solve the master until the
/// relative gap drops below epsilon or max_iters is hit (in which case
/// the state comes back flagged unconverged).
SilpState column_generation(const std::vector<KernelMatrix>& kernels,
                            const PsdFactor& factor, const SolverConfig& cfg);

/// Full fit at the pencil level: factor (L, L'), learn mu by SILP, then
/// solve the pencil at K* = sum_m mu*_m K^m.
struct MklSolution {
  SimplexWeights mu_star{Vector::Ones(1)};
  GevdResult gevd;            // truncated to the requested dims
  double objective = 0.0;     // sum over ALL positive eigenvalues at K*
  std::vector<int> selected;  // 0-based indices with mu above the threshold
  SilpState silp;
  KernelMatrix combined;
};
MklSolution mkl_rt_fit_pencil(const std::vector<KernelMatrix>& kernels,
                              const Matrix& l, const Matrix& lp,
                              const SolverConfig& cfg,
                              std::optional<int> dims = std::nullopt);

/// Task-level fit: build (L, L') for the task, run the SILP, solve at
/// K*, and attach the second-view map where the task has one.
struct MklFitResult {
  EmbeddingModel model;
  SilpState silp;
  double objective = 0.0;
};
MklFitResult mkl_rt_fit(const InstanceSpec& spec,
                        const std::vector<KernelMatrix>& kernels,
                        const SideInputs& side, const SolverConfig& cfg);

}  // namespace mklrt

#endif  // MKLRT_SILP_HPP
