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

#include "mklrt/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mklrt/errors.hpp"

namespace mklrt {

namespace {

std::vector<std::string> default_ids(Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace

double asymmetry(const Matrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

SimplexWeights SimplexWeights::uniform(Index m) {
  if (m < 1) throw validation_error("simplex weights need at least one entry");
  return SimplexWeights{Vector::Constant(m, 1.0 / static_cast<double>(m))};
}

SimplexWeights SimplexWeights::unit(Index m, Index index) {
  if (index < 0 || index >= m) throw validation_error("one-hot index out of range");
  Vector mu = Vector::Zero(m);
  mu[index] = 1.0;
  return SimplexWeights{std::move(mu)};
}

KernelMatrix make_kernel(Matrix values, std::vector<std::string> item_ids) {
  if (values.rows() != values.cols()) {
    throw validation_error("kernel matrix must be square, got " +
                           std::to_string(values.rows()) + "x" +
                           std::to_string(values.cols()));
  }
  if (values.size() == 0) throw validation_error("kernel matrix is empty");
  const double scale = values.cwiseAbs().maxCoeff();
  if (asymmetry(values) > kSymmetryTol * std::max(scale, 1.0)) {
    throw validation_error("kernel matrix is not symmetric within tolerance");
  }
  values = ((values + values.transpose()) * 0.5).eval();
  if (item_ids.empty()) {
    item_ids = default_ids(values.rows());
  } else if (static_cast<Index>(item_ids.size()) != values.rows()) {
    throw validation_error("kernel id count does not match matrix size");
  }
  return KernelMatrix{std::move(values), std::move(item_ids)};
}

CrossKernelMatrix make_cross_kernel(Matrix values, std::vector<std::string> test_ids,
                                    std::vector<std::string> train_ids) {
  if (values.size() == 0) throw validation_error("cross-kernel matrix is empty");
  if (test_ids.empty()) test_ids = default_ids(values.rows());
  if (train_ids.empty()) train_ids = default_ids(values.cols());
  if (static_cast<Index>(test_ids.size()) != values.rows() ||
      static_cast<Index>(train_ids.size()) != values.cols()) {
    throw validation_error("cross-kernel id counts do not match matrix shape");
  }
  return CrossKernelMatrix{std::move(values), std::move(test_ids), std::move(train_ids)};
}

SimplexWeights make_simplex_weights(Vector mu) {
  if (mu.size() < 1) throw validation_error("simplex weights need at least one entry");
  if ((mu.array() < 0.0).any()) {
    throw validation_error("simplex weights must be nonnegative");
  }
  if (std::abs(mu.sum() - 1.0) > kSimplexSumTol) {
    throw validation_error("simplex weights must sum to 1");
  }
  return SimplexWeights{std::move(mu)};
}

DistanceMatrix make_distance_matrix(Matrix values) {
  if (values.rows() != values.cols()) {
    throw validation_error("distance matrix must be square");
  }
  if (values.size() == 0) throw validation_error("distance matrix is empty");
  if ((values.array() < 0.0).any()) {
    throw validation_error("distance matrix has negative entries");
  }
  if (values.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw validation_error("distance matrix diagonal must be exactly zero");
  }
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1.0);
  if (asymmetry(values) > kSymmetryTol * scale) {
    throw validation_error("distance matrix is not symmetric within tolerance");
  }
  values = ((values + values.transpose()) * 0.5).eval();
  values.diagonal().setZero();
  return DistanceMatrix{std::move(values)};
}

LabelVector make_label_vector(const std::vector<int>& raw_labels) {
  if (raw_labels.empty()) throw validation_error("label vector is empty");
  std::map<int, int> remap;  // raw -> 1..P, ascending raw order
  for (int raw : raw_labels) remap.emplace(raw, 0);
  int next = 1;
  for (auto& [raw, mapped] : remap) mapped = next++;
  LabelVector y;
  y.labels.reserve(raw_labels.size());
  for (int raw : raw_labels) y.labels.push_back(remap.at(raw));
  y.num_classes = static_cast<int>(remap.size());
  return y;
}

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const KernelMatrix& k, double* min_eig_out) {
  const double min_eig = min_eigenvalue(k.values);
  if (min_eig_out) *min_eig_out = min_eig;
  const double n = static_cast<double>(k.size());
  return min_eig >= -kPsdTol * k.values.trace() / n;
}

std::vector<int> class_counts(const LabelVector& y) {
  std::vector<int> counts(static_cast<std::size_t>(y.num_classes), 0);
  for (int label : y.labels) {
    if (label < 1 || label > y.num_classes) {
      throw validation_error("label out of range 1..P");
    }
    ++counts[static_cast<std::size_t>(label - 1)];
  }
  for (std::size_t p = 0; p < counts.size(); ++p) {
    if (counts[p] == 0) {
      throw validation_error("class " + std::to_string(p + 1) + " has no items");
    }
  }
  return counts;
}

}  // namespace mklrt
