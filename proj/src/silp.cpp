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

#include "mklrt/silp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "mklrt/errors.hpp"
#include "mklrt/kernel_ops.hpp"
#include "mklrt/linprog.hpp"
#include "mklrt/log.hpp"

namespace mklrt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-kernel quantities that make both the scores and the constraint
// systems independent of N once computed:
//   P_m = G^T K^m G, Q_m = G^T K^m H, t_m = trace(K^m L') = sum_i h_i^T K^m h_i.
struct KernelCache {
  std::vector<Matrix> p;
  std::vector<Matrix> q;
  Vector t;
  Index l = 0;
  Index lp = 0;
};

KernelCache build_cache(const std::vector<KernelMatrix>& kernels,
                        const PsdFactor& factor) {
  KernelCache cache;
  cache.l = factor.rank_l();
  cache.lp = factor.rank_lp();
  cache.t = Vector(static_cast<Index>(kernels.size()));
  cache.p.reserve(kernels.size());
  cache.q.reserve(kernels.size());
  for (std::size_t m = 0; m < kernels.size(); ++m) {
    const Matrix kg = kernels[m].values * factor.G;
    const Matrix kh = kernels[m].values * factor.H;
    cache.p.push_back(factor.G.transpose() * kg);
    cache.q.push_back(factor.G.transpose() * kh);
    cache.t[static_cast<Index>(m)] = (factor.H.cwiseProduct(kh)).sum();
  }
  return cache;
}

double score_from_cache(const Matrix& eta, const KernelCache& cache, std::size_t m,
                        double sigma) {
  const Matrix& p = cache.p[m];
  const Matrix& q = cache.q[m];
  const double quad_self = eta.squaredNorm() / (4.0 * (1.0 - sigma));
  const double quad_kernel = (eta.cwiseProduct(p * eta)).sum() / (4.0 * sigma);
  const double linear = (eta.cwiseProduct(q)).sum();
  return (quad_self + quad_kernel - linear) / sigma + cache.t[static_cast<Index>(m)];
}

Vector scores_from_cache(const Matrix& eta, const KernelCache& cache, double sigma) {
  Vector s(cache.t.size());
  for (Index m = 0; m < s.size(); ++m) {
    s[m] = score_from_cache(eta, cache, static_cast<std::size_t>(m), sigma);
    if (!std::isfinite(s[m])) {
      throw numerical_error("non-finite constraint score S_m");
    }
  }
  return s;
}

// eta* for the combined quantities p_bar = G^T K G, q_bar = G^T K H.
Matrix violator_from_cache(const Matrix& p_bar, const Matrix& q_bar, Index l,
                           Index lp, double sigma) {
  if (l == 0 || lp == 0) return Matrix::Zero(l, lp);
  Matrix system = p_bar / (2.0 * sigma);
  system.diagonal().array() += 1.0 / (2.0 * (1.0 - sigma));
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("constraint system is not positive definite "
                          "(non-finite kernel values or sigma outside (0,1)?)");
  }
  return llt.solve(q_bar);
}

double relative_gap(double weighted_score, double zeta) {
  if (std::isinf(zeta)) return 1.0;  // first iteration: forced to fail
  if (zeta == 0.0) return weighted_score == 0.0 ? 0.0 : kInf;
  return std::abs(1.0 - weighted_score / zeta);
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

double eval_S_m(const Matrix& eta, const KernelMatrix& km, const PsdFactor& factor,
                double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw validation_error("sigma must lie strictly inside (0, 1)");
  }
  if (eta.rows() != factor.rank_l() || eta.cols() != factor.rank_lp()) {
    throw validation_error("eta must be l x l' = " + std::to_string(factor.rank_l()) +
                           " x " + std::to_string(factor.rank_lp()));
  }
  if (km.size() != factor.G.rows()) {
    throw validation_error("kernel size does not match the factor");
  }
  const Matrix kh = km.values * factor.H;
  const double trace_klp = (factor.H.cwiseProduct(kh)).sum();
  const Matrix geta = factor.G * eta;  // N x l'
  const double quad_self = eta.squaredNorm() / (4.0 * (1.0 - sigma));
  const double quad_kernel =
      (geta.cwiseProduct(km.values * geta)).sum() / (4.0 * sigma);
  const double linear = (geta.cwiseProduct(kh)).sum();
  return (quad_self + quad_kernel - linear) / sigma + trace_klp;
}

Matrix most_violated_constraint(const KernelMatrix& k, const PsdFactor& factor,
                                double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw validation_error("sigma must lie strictly inside (0, 1)");
  }
  if (k.size() != factor.G.rows()) {
    throw validation_error("kernel size does not match the factor");
  }
  const Matrix p_bar = factor.G.transpose() * k.values * factor.G;
  const Matrix q_bar = factor.G.transpose() * k.values * factor.H;
  return violator_from_cache(p_bar, q_bar, factor.rank_l(), factor.rank_lp(), sigma);
}

std::pair<SimplexWeights, double> solve_restricted_master(
    const std::vector<Vector>& scores) {
  if (scores.empty()) throw validation_error("master needs at least one constraint");
  const Index m = scores.front().size();
  if (m < 1) throw validation_error("master needs at least one kernel");
  for (const Vector& s : scores) {
    if (s.size() != m) throw validation_error("score vectors differ in length");
  }

  // Variables [mu_1..mu_M, zeta+, zeta-]; maximize zeta+ - zeta- subject
  // to -s_c^T mu + zeta+ - zeta- <= 0 for each stored constraint and
  // sum mu = 1.
  LpProblem lp;
  lp.c = Vector::Zero(m + 2);
  lp.c[m] = -1.0;
  lp.c[m + 1] = 1.0;
  lp.a_ub = Matrix::Zero(static_cast<Index>(scores.size()), m + 2);
  lp.b_ub = Vector::Zero(static_cast<Index>(scores.size()));
  for (std::size_t cidx = 0; cidx < scores.size(); ++cidx) {
    lp.a_ub.row(static_cast<Index>(cidx)).head(m) = -scores[cidx].transpose();
    lp.a_ub(static_cast<Index>(cidx), m) = 1.0;
    lp.a_ub(static_cast<Index>(cidx), m + 1) = -1.0;
  }
  lp.a_eq = Matrix::Zero(1, m + 2);
  lp.a_eq.row(0).head(m).setOnes();
  lp.b_eq = Vector::Ones(1);

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw numerical_error("restricted master LP did not solve (status " +
                          std::to_string(static_cast<int>(sol.status)) + ")");
  }

  // Among visited vertices with the optimal value, prefer the
  // lexicographically smallest mu.
  Vector best = sol.x;
  for (const auto& [x, obj] : sol.visited) {
    if (obj <= sol.objective + 1e-11 && lex_less(x.head(m), best.head(m))) {
      best = x;
    }
  }
  Vector mu = best.head(m).cwiseMax(0.0);
  const double total = mu.sum();
  if (!(total > 0.0)) throw numerical_error("master returned a zero weight vector");
  mu /= total;
  const double zeta = best[m] - best[m + 1];
  return {SimplexWeights{std::move(mu)}, zeta};
}

SilpState column_generation(const std::vector<KernelMatrix>& kernels,
                            const PsdFactor& factor, const SolverConfig& cfg) {
  if (kernels.empty()) throw validation_error("no kernels given");
  if (!(cfg.epsilon > 0.0)) throw validation_error("epsilon must be positive");
  if (cfg.max_iters < 1) throw validation_error("max_iters must be at least 1");
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) {
    throw validation_error("sigma must lie strictly inside (0, 1)");
  }
  for (const auto& k : kernels) {
    if (k.size() != factor.G.rows()) {
      throw validation_error("kernel size does not match the factor");
    }
    if (k.item_ids != kernels.front().item_ids) {
      throw validation_error("base kernels disagree on item order");
    }
  }

  const KernelCache cache = build_cache(kernels, factor);
  const Index m = static_cast<Index>(kernels.size());

  SilpState state;
  state.mu = SimplexWeights::uniform(m);
  state.zeta = kInf;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    state.iterations = t;

    // Combined P, Q at the current weights; the N x N kernels are not
    // touched again after the cache is built.
    Matrix p_bar = Matrix::Zero(cache.l, cache.l);
    Matrix q_bar = Matrix::Zero(cache.l, cache.lp);
    for (Index j = 0; j < m; ++j) {
      p_bar.noalias() += state.mu.mu[j] * cache.p[static_cast<std::size_t>(j)];
      q_bar.noalias() += state.mu.mu[j] * cache.q[static_cast<std::size_t>(j)];
    }
    const Matrix eta = violator_from_cache(p_bar, q_bar, cache.l, cache.lp, cfg.sigma);
    const Vector scores = scores_from_cache(eta, cache, cfg.sigma);
    const double weighted = state.mu.mu.dot(scores);
    const double gap = relative_gap(weighted, state.zeta);
    state.history.push_back({t, state.zeta, weighted, gap, state.mu.mu});

    if (gap < cfg.epsilon) {
      state.converged = true;
      return state;
    }
    state.constraints.push_back(eta);
    state.constraint_scores.push_back(scores);
    auto [mu, zeta] = solve_restricted_master(state.constraint_scores);
    state.mu = std::move(mu);
    state.zeta = zeta;
  }

  warn("column generation hit the iteration cap (" + std::to_string(cfg.max_iters) +
       ") with gap " +
       std::to_string(state.history.empty() ? 1.0 : state.history.back().gap));
  state.converged = false;
  return state;
}

namespace {

GevdResult truncated(GevdResult full, std::optional<int> dims) {
  if (!dims || full.rank() <= *dims) return full;
  GevdResult out;
  out.gamma = full.gamma.leftCols(*dims);
  out.lambda = full.lambda.head(*dims);
  out.objective = out.lambda.sum();
  out.jittered = full.jittered;
  out.jitter = full.jitter;
  return out;
}

}  // namespace

MklSolution mkl_rt_fit_pencil(const std::vector<KernelMatrix>& kernels,
                              const Matrix& l, const Matrix& lp,
                              const SolverConfig& cfg, std::optional<int> dims) {
  const PsdFactor factor = factor_pencil_sides(l, lp, cfg.rank_tol);
  SilpState silp = column_generation(kernels, factor, cfg);

  MklSolution out;
  out.mu_star = silp.mu;
  out.combined = combine(out.mu_star, kernels);
  const auto inst = make_ratio_trace_instance(out.combined, l, lp, cfg.sigma);
  const GevdResult full = solve_gevd_pencil(inst, std::nullopt);
  out.objective = full.objective;
  out.gevd = truncated(full, dims);
  for (Index i = 0; i < out.mu_star.size(); ++i) {
    if (out.mu_star.mu[i] > cfg.selection_threshold) {
      out.selected.push_back(static_cast<int>(i));
    }
  }
  if (out.selected.empty()) {
    // With M beyond 1/threshold a uniform mu can fall below the cutoff;
    // keep the argmax so the selection is never empty.
    Index arg = 0;
    out.mu_star.mu.maxCoeff(&arg);
    out.selected.push_back(static_cast<int>(arg));
  }
  out.silp = std::move(silp);
  return out;
}

MklFitResult mkl_rt_fit(const InstanceSpec& spec,
                        const std::vector<KernelMatrix>& kernels,
                        const SideInputs& side, const SolverConfig& cfg_in) {
  SolverConfig cfg = cfg_in;
  cfg.sigma = spec.sigma;  // the task spec owns sigma
  if (kernels.empty()) throw validation_error("no kernels given");
  Matrix l, lp;
  Matrix e;      // lkcca only
  Vector dz;     // lkcca only
  switch (spec.task) {
    case Task::kfda: {
      if (!side.labels_x) throw validation_error("kfda needs first-view labels");
      if (side.labels_x->size() != kernels.front().size()) {
        throw validation_error("labels and kernels disagree on size");
      }
      PencilSides sides = build_kfda(*side.labels_x, spec.kfda_variant);
      l = std::move(sides.L);
      lp = std::move(sides.Lp);
      break;
    }
    case Task::kcca: {
      if (!side.kernel_z) throw validation_error("kcca needs a second-view kernel");
      if (side.kernel_z->size() != kernels.front().size()) {
        throw validation_error("the two views of kcca must be paired (same N)");
      }
      PencilSides sides = build_kcca(*side.kernel_z, spec.sigma);
      l = std::move(sides.L);
      lp = std::move(sides.Lp);
      break;
    }
    case Task::lkcca: {
      if (!side.labels_x || !side.labels_z || !side.kernel_z) {
        throw validation_error("lkcca needs labels for both views and a second-view kernel");
      }
      if (side.labels_x->size() != kernels.front().size()) {
        throw validation_error("first-view labels and kernels disagree on size");
      }
      LkccaSides sides =
          build_lkcca(*side.labels_x, *side.labels_z, *side.kernel_z, spec.sigma);
      l = std::move(sides.L);
      lp = std::move(sides.Lp);
      e = std::move(sides.E);
      dz = std::move(sides.dz);
      break;
    }
  }

  const std::optional<int> dims = default_dims(spec, side);
  MklSolution sol = mkl_rt_fit_pencil(kernels, l, lp, cfg, dims);

  MklFitResult out;
  out.objective = sol.objective;
  out.model.task = spec.task;
  out.model.sigma = spec.sigma;
  out.model.mu = sol.mu_star;
  out.model.combine_rule = CombineRule::linear;
  out.model.gamma = sol.gevd.gamma;
  out.model.lambda = sol.gevd.lambda;
  out.model.train_ids_x = sol.combined.item_ids;
  out.model.selected = sol.selected;
  out.model.converged = sol.silp.converged;
  if (spec.task == Task::kcca) {
    out.model.xi = compute_xi_kcca(side.kernel_z->values, sol.combined.values,
                                   sol.gevd.gamma, sol.gevd.lambda, spec.sigma);
    out.model.train_ids_z = side.kernel_z->item_ids;
  } else if (spec.task == Task::lkcca) {
    out.model.xi = compute_xi_lkcca(side.kernel_z->values, sol.combined.values, e, dz,
                                    sol.gevd.gamma, sol.gevd.lambda, spec.sigma);
    out.model.train_ids_z = side.kernel_z->item_ids;
  }
  out.silp = std::move(sol.silp);
  return out;
}

}  // namespace mklrt
