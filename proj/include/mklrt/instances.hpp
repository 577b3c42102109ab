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

#ifndef MKLRT_INSTANCES_HPP
#define MKLRT_INSTANCES_HPP

#include <optional>
#include <string>
#include <vector>

#include "mklrt/ratio_trace.hpp"
#include "mklrt/types.hpp"

namespace mklrt {

enum class Task { kfda, kcca, lkcca };

/// KFDA's within-class side: variant A uses L = I - L', variant B uses
/// L = I.
enum class KfdaVariant { a, b };

struct InstanceSpec {
  Task task = Task::kfda;
  double sigma = 0.5;
  std::optional<int> dims;  // default: P-1 for kfda/lkcca, full rank for kcca
  KfdaVariant kfda_variant = KfdaVariant::a;
};

/// The (L, L') pair defining one ratio-trace problem.
struct PencilSides {
  Matrix L;
  Matrix Lp;
};

/// L' = sum_p (1/N_p) 1_p 1_p^T; L = I - L' (variant A) or I (variant B).
PencilSides build_kfda(const LabelVector& y, KfdaVariant variant);

/// L' = K^z ((1-sigma) K^z + sigma I)^-1 (computed by linear solves and
/// symmetrized), L = I.
PencilSides build_kcca(const KernelMatrix& kz, double sigma);

/// Label-paired two-view sides. E pairs every first-view item with every
/// same-class second-view item; D^x and D^z count the partners.
struct LkccaSides {
  Matrix L;    // D^x, diagonal
  Matrix Lp;   // E K^z (sigma I + (1-sigma) D^z K^z)^-1 E^T, symmetrized
  Matrix E;    // N_x x N_z pairing indicator
  Vector dz;   // diagonal of D^z
};
LkccaSides build_lkcca(const LabelVector& y, const LabelVector& w,
                       const KernelMatrix& kz, double sigma);

/// Second-view map Xi = ((1-sigma) K^z + sigma I)^-1 K^x Gamma Lambda^-1/2.
Matrix compute_xi_kcca(const Matrix& kz, const Matrix& kx, const Matrix& gamma,
                       const Vector& lambda, double sigma);

/// Second-view map Xi = ((1-sigma) D^z K^z + sigma I)^-1 E^T K^x Gamma Lambda^-1/2.
Matrix compute_xi_lkcca(const Matrix& kz, const Matrix& kx, const Matrix& e,
                        const Vector& dz, const Matrix& gamma, const Vector& lambda,
                        double sigma);

/// Task-dependent side data: labels for kfda/lkcca, the second-view
/// kernel for kcca/lkcca.
struct SideInputs {
  std::optional<LabelVector> labels_x;
  std::optional<LabelVector> labels_z;
  std::optional<KernelMatrix> kernel_z;
};

/// A fitted embedding: first-view map Gamma, optional second-view map Xi,
/// the kernel weights that produced the combined kernel, and enough
/// bookkeeping to project new data deterministically.
struct EmbeddingModel {
  Task task = Task::kfda;
  double sigma = 0.5;
  SimplexWeights mu{Vector::Ones(1)};
  CombineRule combine_rule = CombineRule::linear;
  Matrix gamma;                // N_x x r
  Vector lambda;               // r, positive descending
  std::optional<Matrix> xi;    // N_z x r, two-view tasks only
  std::vector<std::string> train_ids_x;
  std::vector<std::string> train_ids_z;
  std::vector<int> selected;   // 0-based kernel indices with mu > threshold
  bool converged = true;

  Index rank() const { return lambda.size(); }
};

/// Builds (L, L') for the task and solves the pencil at an
/// already-combined kernel. dims falls back to the task default.
EmbeddingModel fit_with_combined(const InstanceSpec& spec, const KernelMatrix& combined,
                                 const SideInputs& side, SimplexWeights mu,
                                 CombineRule rule);

/// Fixed-weight fit: combine the base kernels with mu, then fit.
EmbeddingModel fit_instance(const InstanceSpec& spec,
                            const std::vector<KernelMatrix>& kernels,
                            const SimplexWeights& mu, const SideInputs& side);

enum class View { first, second };

/// Latent coordinates for out-of-sample items: combine the cross kernels
/// with the model's weights, then apply Gamma (first view) or Xi (second
/// view, single cross kernel).
Matrix project(const EmbeddingModel& model,
               const std::vector<CrossKernelMatrix>& cross_kernels, View view);

/// P-1 for the labeled tasks; unset (full rank) for kcca.
std::optional<int> default_dims(const InstanceSpec& spec, const SideInputs& side);

const char* task_name(Task t);
Task task_from_name(const std::string& name);

}  // namespace mklrt

#endif  // MKLRT_INSTANCES_HPP
