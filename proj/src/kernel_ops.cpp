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

#include "mklrt/kernel_ops.hpp"

#include <cmath>
#include <string>

#include "mklrt/errors.hpp"
#include "mklrt/log.hpp"

namespace mklrt {

namespace {

void check_aligned(const std::vector<KernelMatrix>& kernels) {
  if (kernels.empty()) throw validation_error("kernel list is empty");
  const auto& first = kernels.front();
  for (std::size_t m = 1; m < kernels.size(); ++m) {
    if (kernels[m].size() != first.size()) {
      throw validation_error("kernel " + std::to_string(m) + " has size " +
                             std::to_string(kernels[m].size()) + ", expected " +
                             std::to_string(first.size()));
    }
    if (kernels[m].item_ids != first.item_ids) {
      throw validation_error("kernel " + std::to_string(m) +
                             " item order differs from kernel 0");
    }
  }
}

void check_weight_count(const SimplexWeights& weights, std::size_t m) {
  if (static_cast<std::size_t>(weights.size()) != m) {
    throw validation_error("got " + std::to_string(weights.size()) +
                           " weights for " + std::to_string(m) + " kernels");
  }
}

}  // namespace

KernelMatrix combine(const SimplexWeights& weights,
                     const std::vector<KernelMatrix>& kernels) {
  check_aligned(kernels);
  check_weight_count(weights, kernels.size());
  Matrix sum = Matrix::Zero(kernels.front().size(), kernels.front().size());
  for (std::size_t m = 0; m < kernels.size(); ++m) {
    sum.noalias() += weights.mu[static_cast<Index>(m)] * kernels[m].values;
  }
  sum = ((sum + sum.transpose()) * 0.5).eval();
  return KernelMatrix{std::move(sum), kernels.front().item_ids};
}

KernelMatrix combine_product(const SimplexWeights& weights,
                             const std::vector<KernelMatrix>& kernels) {
  check_aligned(kernels);
  check_weight_count(weights, kernels.size());
  for (std::size_t m = 0; m < kernels.size(); ++m) {
    if ((kernels[m].values.array() <= 0.0).any()) {
      throw validation_error("geometric mean needs strictly positive entries; "
                             "kernel " + std::to_string(m) + " violates this");
    }
  }
  Matrix logsum = Matrix::Zero(kernels.front().size(), kernels.front().size());
  for (std::size_t m = 0; m < kernels.size(); ++m) {
    logsum.array() +=
        weights.mu[static_cast<Index>(m)] * kernels[m].values.array().log();
  }
  Matrix out = logsum.array().exp();
  out = ((out + out.transpose()) * 0.5).eval();
  return KernelMatrix{std::move(out), kernels.front().item_ids};
}

Matrix combine_cross(CombineRule rule, const SimplexWeights& weights,
                     const std::vector<CrossKernelMatrix>& kernels) {
  if (kernels.empty()) throw validation_error("cross-kernel list is empty");
  check_weight_count(weights, kernels.size());
  const Index rows = kernels.front().rows();
  const Index cols = kernels.front().cols();
  for (std::size_t m = 1; m < kernels.size(); ++m) {
    if (kernels[m].rows() != rows || kernels[m].cols() != cols) {
      throw validation_error("cross-kernel shapes differ across the list");
    }
  }
  if (rule == CombineRule::linear) {
    Matrix sum = Matrix::Zero(rows, cols);
    for (std::size_t m = 0; m < kernels.size(); ++m) {
      sum.noalias() += weights.mu[static_cast<Index>(m)] * kernels[m].values;
    }
    return sum;
  }
  Matrix logsum = Matrix::Zero(rows, cols);
  for (std::size_t m = 0; m < kernels.size(); ++m) {
    if ((kernels[m].values.array() <= 0.0).any()) {
      throw validation_error("geometric mean needs strictly positive entries; "
                             "cross kernel " + std::to_string(m) + " violates this");
    }
    logsum.array() +=
        weights.mu[static_cast<Index>(m)] * kernels[m].values.array().log();
  }
  return logsum.array().exp();
}

DistanceMatrix distance_from_kernel(const KernelMatrix& k, std::size_t* clamped_out) {
  const Index n = k.size();
  const Vector diag = k.values.diagonal();
  Matrix d2 = diag.replicate(1, n) + diag.transpose().replicate(n, 1) -
              k.values - k.values.transpose();
  std::size_t clamped = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (d2(i, j) < 0.0) {
        if (i != j) ++clamped;  // diagonal roundoff is expected, not reported
        d2(i, j) = 0.0;
      }
    }
  }
  if (clamped > 0) {
    warn("distance_from_kernel clamped " + std::to_string(clamped) +
         " negative squared distances to zero (indefinite kernel?)");
  }
  if (clamped_out) *clamped_out = clamped;
  Matrix d = d2.cwiseSqrt();
  d = ((d + d.transpose()) * 0.5).eval();
  d.diagonal().setZero();
  return DistanceMatrix{std::move(d)};
}

double rbf_bandwidth(const DistanceMatrix& d) {
  const Index n = d.size();
  if (n < 2) throw validation_error("bandwidth needs at least two items");
  const double total = d.values.sum();  // diagonal is zero
  return total / static_cast<double>(n * (n - 1));
}

KernelMatrix rbf_from_distance(const DistanceMatrix& d) {
  const double eta = rbf_bandwidth(d);
  if (eta <= 0.0) {
    throw validation_error("all pairwise distances are zero; RBF bandwidth undefined");
  }
  Matrix k = (-d.values.array() / eta).exp();
  return make_kernel(std::move(k));
}

CrossKernelMatrix rbf_cross_from_distance(const Matrix& distances, double eta,
                                          std::vector<std::string> test_ids,
                                          std::vector<std::string> train_ids) {
  if (eta <= 0.0) throw validation_error("RBF bandwidth must be positive");
  if ((distances.array() < 0.0).any()) {
    throw validation_error("cross distances must be nonnegative");
  }
  Matrix k = (-distances.array() / eta).exp();
  return make_cross_kernel(std::move(k), std::move(test_ids), std::move(train_ids));
}

KernelMatrix center_train(const KernelMatrix& k) {
  const Vector col_means = k.values.colwise().mean();
  const double grand_mean = col_means.mean();
  // H K H = K - 1 c^T - c 1^T + mean(K) 1 1^T with c = column means.
  Matrix out = k.values;
  out.rowwise() -= col_means.transpose();
  out.colwise() -= col_means;
  out.array() += grand_mean;
  out = ((out + out.transpose()) * 0.5).eval();
  return KernelMatrix{std::move(out), k.item_ids};
}

Matrix center_cross_values(const Matrix& kt, const Vector& train_col_means) {
  if (kt.cols() != train_col_means.size()) {
    throw validation_error("cross kernel and training column means disagree on N");
  }
  // (K_t - 1 c^T) H: subtract train column means, then row-center.
  Matrix out = kt;
  out.rowwise() -= train_col_means.transpose();
  const Vector row_means = out.rowwise().mean();
  out.colwise() -= row_means;
  return out;
}

CrossKernelMatrix center_cross(const CrossKernelMatrix& kt, const KernelMatrix& k_train) {
  if (kt.train_ids != k_train.item_ids) {
    throw validation_error("cross kernel train ids do not match the training kernel");
  }
  Matrix out = center_cross_values(kt.values, k_train.values.colwise().mean());
  return CrossKernelMatrix{std::move(out), kt.test_ids, kt.train_ids};
}

KernelMatrix normalize_trace(const KernelMatrix& k) {
  const double tr = k.values.trace();
  if (!(tr > 0.0)) {
    throw validation_error("trace normalization needs trace > 0, got " +
                           std::to_string(tr));
  }
  const double scale = static_cast<double>(k.size()) / tr;
  return KernelMatrix{k.values * scale, k.item_ids};
}

}  // namespace mklrt
