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

#include "mklrt/toy.hpp"

#include <Eigen/QR>
#include <cmath>

#include "mklrt/errors.hpp"

namespace mklrt {

ToyData make_two_blobs(int per_class, double separation, std::uint64_t seed) {
  Rng rng(seed);
  ToyData toy;
  toy.points = Matrix(2 * per_class, 2);
  toy.labels.reserve(static_cast<std::size_t>(2 * per_class));
  for (int c = 0; c < 2; ++c) {
    const double cx = c == 0 ? 0.0 : separation;
    for (int i = 0; i < per_class; ++i) {
      const Index row = c * per_class + i;
      toy.points(row, 0) = cx + rng.gaussian();
      toy.points(row, 1) = rng.gaussian();
      toy.labels.push_back(c + 1);
    }
  }
  return toy;
}

ToyData make_blobs(int num_classes, int per_class, double radius, Rng& rng) {
  if (num_classes < 1 || per_class < 1) {
    throw validation_error("blob counts must be positive");
  }
  ToyData toy;
  toy.points = Matrix(num_classes * per_class, 2);
  toy.labels.reserve(static_cast<std::size_t>(num_classes * per_class));
  for (int c = 0; c < num_classes; ++c) {
    const double angle = 2.0 * M_PI * c / num_classes;
    const double cx = radius * std::cos(angle);
    const double cy = radius * std::sin(angle);
    for (int i = 0; i < per_class; ++i) {
      const Index row = c * per_class + i;
      toy.points(row, 0) = cx + rng.gaussian();
      toy.points(row, 1) = cy + rng.gaussian();
      toy.labels.push_back(c + 1);
    }
  }
  return toy;
}

Matrix pairwise_distances(const Matrix& a, const Matrix& b) {
  Matrix d(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.rows(); ++j) {
      d(i, j) = (a.row(i) - b.row(j)).norm();
    }
  }
  return d;
}

DistanceMatrix pairwise_distances(const Matrix& points) {
  Matrix d = pairwise_distances(points, points);
  d = ((d + d.transpose()) * 0.5).eval();
  d.diagonal().setZero();
  return DistanceMatrix{std::move(d)};
}

Matrix random_psd(Index n, Rng& rng, double min_eig, double max_eig) {
  Matrix raw(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) raw(i, j) = rng.gaussian();
  }
  const Matrix q = Eigen::HouseholderQR<Matrix>(raw).householderQ();
  Vector eigs(n);
  for (Index i = 0; i < n; ++i) {
    eigs[i] = min_eig + (max_eig - min_eig) * rng.uniform();
  }
  Matrix out = q * eigs.asDiagonal() * q.transpose();
  return ((out + out.transpose()) * 0.5).eval();
}

KernelMatrix random_psd_kernel(Index n, Rng& rng, double min_eig, double max_eig) {
  return make_kernel(random_psd(n, rng, min_eig, max_eig));
}

std::vector<int> random_labels(Index n, int num_classes, Rng& rng) {
  if (n < num_classes) throw validation_error("need at least one item per class");
  std::vector<int> labels(static_cast<std::size_t>(n));
  // First one of each class guarantees occupancy, the rest is uniform;
  // a shuffle removes the positional pattern.
  for (Index i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] =
        i < num_classes ? static_cast<int>(i) + 1
                        : static_cast<int>(rng.below(static_cast<std::uint64_t>(num_classes))) + 1;
  }
  rng.shuffle(labels);
  return labels;
}

KernelMatrix label_aligned_kernel(const std::vector<int>& labels, Rng& rng,
                                  double noise) {
  const Index n = static_cast<Index>(labels.size());
  Matrix block = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
        block(i, j) = 1.0;
      }
    }
  }
  // Sum of PSD pieces stays PSD.
  Matrix out = block + noise * random_psd(n, rng, 0.0, 1.0);
  return make_kernel(std::move(out));
}

}  // namespace mklrt
