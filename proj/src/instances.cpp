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

#include "mklrt/instances.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>

#include "mklrt/errors.hpp"
#include "mklrt/kernel_ops.hpp"
#include "mklrt/log.hpp"

namespace mklrt {

namespace {

// L' comes out of a linear solve; require the pre-symmetrization skew to
// be roundoff-sized before averaging it away.
Matrix symmetrize_checked(Matrix m, const char* what) {
  const double skew = asymmetry(m);
  const double scale = std::max(m.norm(), 1e-300);
  if (skew > 1e-6 * scale) {
    warn(std::string(what) + " asymmetry before symmetrization is " +
         std::to_string(skew) + " (relative " + std::to_string(skew / scale) + ")");
  }
  return ((m + m.transpose()) * 0.5).eval();
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw validation_error("sigma must lie strictly inside (0, 1)");
  }
}

}  // namespace

PencilSides build_kfda(const LabelVector& y, KfdaVariant variant) {
  const std::vector<int> counts = class_counts(y);  // also validates occupancy
  const Index n = y.size();
  auto label = [&](Index i) { return y.labels[static_cast<std::size_t>(i)]; };
  Matrix lp = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double wi = 1.0 / counts[static_cast<std::size_t>(label(i) - 1)];
    for (Index j = 0; j < n; ++j) {
      if (label(i) == label(j)) lp(i, j) = wi;
    }
  }
  PencilSides out;
  out.Lp = std::move(lp);
  out.L = (variant == KfdaVariant::a) ? Matrix(Matrix::Identity(n, n) - out.Lp)
                                      : Matrix(Matrix::Identity(n, n));
  return out;
}

PencilSides build_kcca(const KernelMatrix& kz, double sigma) {
  check_sigma(sigma);
  const Index n = kz.size();
  Matrix system = (1.0 - sigma) * kz.values + sigma * Matrix::Identity(n, n);
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("KCCA regularized system is not positive definite "
                          "(is the second-view kernel PSD?)");
  }
  // L' = K^z ((1-sigma) K^z + sigma I)^-1; the two factors commute, so
  // solving the system against K^z gives the same matrix.
  Matrix lp = llt.solve(kz.values);
  PencilSides out;
  out.Lp = symmetrize_checked(std::move(lp), "KCCA L'");
  out.L = Matrix::Identity(n, n);
  return out;
}

LkccaSides build_lkcca(const LabelVector& y, const LabelVector& w,
                       const KernelMatrix& kz, double sigma) {
  check_sigma(sigma);
  if (w.size() != kz.size()) {
    throw validation_error("second-view labels and kernel disagree on size");
  }
  const std::vector<int> nx = class_counts(y);
  const std::vector<int> nz = class_counts(w);
  if (y.num_classes != w.num_classes) {
    throw validation_error("the two views must share the class set; got " +
                           std::to_string(y.num_classes) + " vs " +
                           std::to_string(w.num_classes) + " classes");
  }
  const Index n_x = y.size();
  const Index n_z = w.size();
  auto ylab = [&](Index i) { return y.labels[static_cast<std::size_t>(i)]; };
  auto wlab = [&](Index j) { return w.labels[static_cast<std::size_t>(j)]; };

  Matrix e = Matrix::Zero(n_x, n_z);
  for (Index i = 0; i < n_x; ++i) {
    for (Index j = 0; j < n_z; ++j) {
      if (ylab(i) == wlab(j)) e(i, j) = 1.0;
    }
  }
  // D^x_ii counts the second-view partners of x_i and vice versa.
  Vector dx(n_x);
  for (Index i = 0; i < n_x; ++i) {
    dx[i] = nz[static_cast<std::size_t>(ylab(i) - 1)];
  }
  Vector dz(n_z);
  for (Index j = 0; j < n_z; ++j) {
    dz[j] = nx[static_cast<std::size_t>(wlab(j) - 1)];
  }

  // sigma I + (1-sigma) D^z K^z is nonsymmetric; partial-pivot LU. It is
  // always invertible for sigma in (0,1) and PSD K^z.
  Matrix system = sigma * Matrix::Identity(n_z, n_z) +
                  (1.0 - sigma) * (dz.asDiagonal() * kz.values);
  Eigen::PartialPivLU<Matrix> lu(system);
  Matrix solved = lu.solve(Matrix(e.transpose()));  // (sigma I + ...)^-1 E^T
  Matrix lp = e * kz.values * solved;

  LkccaSides out;
  out.Lp = symmetrize_checked(std::move(lp), "LKCCA L'");
  out.L = Matrix(dx.asDiagonal());
  out.E = std::move(e);
  out.dz = std::move(dz);
  return out;
}

namespace {

Matrix apply_inv_sqrt_lambda(Matrix m, const Vector& lambda) {
  for (Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] > 0.0)) {
      throw validation_error("Xi needs strictly positive eigenvalues");
    }
    m.col(i) /= std::sqrt(lambda[i]);
  }
  return m;
}

}  // namespace

Matrix compute_xi_kcca(const Matrix& kz, const Matrix& kx, const Matrix& gamma,
                       const Vector& lambda, double sigma) {
  check_sigma(sigma);
  if (gamma.cols() != lambda.size()) {
    throw validation_error("Gamma and Lambda disagree on rank");
  }
  const Index n = kz.rows();
  Matrix system = (1.0 - sigma) * kz + sigma * Matrix::Identity(n, n);
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("KCCA regularized system is not positive definite");
  }
  return apply_inv_sqrt_lambda(llt.solve(kx * gamma), lambda);
}

Matrix compute_xi_lkcca(const Matrix& kz, const Matrix& kx, const Matrix& e,
                        const Vector& dz, const Matrix& gamma, const Vector& lambda,
                        double sigma) {
  check_sigma(sigma);
  if (gamma.cols() != lambda.size()) {
    throw validation_error("Gamma and Lambda disagree on rank");
  }
  const Index n_z = kz.rows();
  Matrix system = (1.0 - sigma) * (dz.asDiagonal() * kz) +
                  sigma * Matrix::Identity(n_z, n_z);
  Eigen::PartialPivLU<Matrix> lu(system);
  return apply_inv_sqrt_lambda(lu.solve(e.transpose() * (kx * gamma)), lambda);
}

std::optional<int> default_dims(const InstanceSpec& spec, const SideInputs& side) {
  if (spec.dims) return spec.dims;
  if (spec.task == Task::kfda || spec.task == Task::lkcca) {
    if (!side.labels_x) throw validation_error("labels required for this task");
    return side.labels_x->num_classes - 1;
  }
  return std::nullopt;  // kcca: keep every pair above the rank tolerance
}

EmbeddingModel fit_with_combined(const InstanceSpec& spec, const KernelMatrix& combined,
                                 const SideInputs& side, SimplexWeights mu,
                                 CombineRule rule) {
  EmbeddingModel model;
  model.task = spec.task;
  model.sigma = spec.sigma;
  model.mu = std::move(mu);
  model.combine_rule = rule;
  model.train_ids_x = combined.item_ids;

  std::optional<int> dims = default_dims(spec, side);
  if (dims && *dims < 1) {
    throw validation_error("embedding dimension must be at least 1");
  }

  switch (spec.task) {
    case Task::kfda: {
      if (!side.labels_x) throw validation_error("kfda needs first-view labels");
      if (side.labels_x->size() != combined.size()) {
        throw validation_error("labels and kernel disagree on size");
      }
      const PencilSides sides = build_kfda(*side.labels_x, spec.kfda_variant);
      const auto inst =
          make_ratio_trace_instance(combined, sides.L, sides.Lp, spec.sigma);
      const GevdResult g = solve_gevd_pencil(inst, dims);
      model.gamma = g.gamma;
      model.lambda = g.lambda;
      break;
    }
    case Task::kcca: {
      if (!side.kernel_z) throw validation_error("kcca needs a second-view kernel");
      if (side.kernel_z->size() != combined.size()) {
        throw validation_error("the two views of kcca must be paired (same N)");
      }
      const PencilSides sides = build_kcca(*side.kernel_z, spec.sigma);
      const auto inst =
          make_ratio_trace_instance(combined, sides.L, sides.Lp, spec.sigma);
      const GevdResult g = solve_gevd_pencil(inst, dims);
      model.gamma = g.gamma;
      model.lambda = g.lambda;
      model.xi = compute_xi_kcca(side.kernel_z->values, combined.values, g.gamma,
                                 g.lambda, spec.sigma);
      model.train_ids_z = side.kernel_z->item_ids;
      break;
    }
    case Task::lkcca: {
      if (!side.labels_x || !side.labels_z || !side.kernel_z) {
        throw validation_error("lkcca needs labels for both views and a second-view kernel");
      }
      if (side.labels_x->size() != combined.size()) {
        throw validation_error("first-view labels and kernel disagree on size");
      }
      const LkccaSides sides =
          build_lkcca(*side.labels_x, *side.labels_z, *side.kernel_z, spec.sigma);
      const auto inst =
          make_ratio_trace_instance(combined, sides.L, sides.Lp, spec.sigma);
      const GevdResult g = solve_gevd_pencil(inst, dims);
      model.gamma = g.gamma;
      model.lambda = g.lambda;
      model.xi = compute_xi_lkcca(side.kernel_z->values, combined.values, sides.E,
                                  sides.dz, g.gamma, g.lambda, spec.sigma);
      model.train_ids_z = side.kernel_z->item_ids;
      break;
    }
  }
  return model;
}

EmbeddingModel fit_instance(const InstanceSpec& spec,
                            const std::vector<KernelMatrix>& kernels,
                            const SimplexWeights& mu, const SideInputs& side) {
  const KernelMatrix combined = combine(mu, kernels);
  return fit_with_combined(spec, combined, side, mu, CombineRule::linear);
}

Matrix project(const EmbeddingModel& model,
               const std::vector<CrossKernelMatrix>& cross_kernels, View view) {
  if (cross_kernels.empty()) throw validation_error("no cross kernels given");
  if (view == View::second) {
    if (!model.xi) {
      throw validation_error("model has no second-view map");
    }
    if (cross_kernels.size() != 1) {
      throw validation_error("the second view uses a single kernel; got " +
                             std::to_string(cross_kernels.size()));
    }
    const CrossKernelMatrix& ck = cross_kernels.front();
    if (ck.cols() != model.xi->rows()) {
      throw validation_error("cross kernel columns do not match training size");
    }
    if (!model.train_ids_z.empty() && ck.train_ids != model.train_ids_z) {
      throw validation_error("cross kernel train ids do not match the model");
    }
    return ck.values * (*model.xi);
  }

  if (static_cast<Index>(cross_kernels.size()) != model.mu.size()) {
    throw validation_error("expected " + std::to_string(model.mu.size()) +
                           " cross kernels, got " + std::to_string(cross_kernels.size()));
  }
  for (const auto& ck : cross_kernels) {
    if (ck.cols() != model.gamma.rows()) {
      throw validation_error("cross kernel columns do not match training size");
    }
    if (!model.train_ids_x.empty() && ck.train_ids != model.train_ids_x) {
      throw validation_error("cross kernel train ids do not match the model");
    }
  }
  const Matrix combined = combine_cross(model.combine_rule, model.mu, cross_kernels);
  return combined * model.gamma;
}

const char* task_name(Task t) {
  switch (t) {
    case Task::kfda: return "kfda";
    case Task::kcca: return "kcca";
    case Task::lkcca: return "lkcca";
  }
  return "?";
}

Task task_from_name(const std::string& name) {
  if (name == "kfda") return Task::kfda;
  if (name == "kcca") return Task::kcca;
  if (name == "lkcca") return Task::lkcca;
  throw validation_error("unknown task '" + name + "' (expected kfda, kcca or lkcca)");
}

}  // namespace mklrt
