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

#ifndef MKLRT_TOY_HPP
#define MKLRT_TOY_HPP

#include <cstdint>
#include <vector>

#include "mklrt/random.hpp"
#include "mklrt/types.hpp"

namespace mklrt {

/// Labeled point cloud used by tests and the toy experiments.
struct ToyData {
  Matrix points;            // n x dim
  std::vector<int> labels;  // 1..P
};

/// Two unit-variance Gaussian blobs in 2-D with the given center
/// separation, per_class points each, classes 1 and 2.
ToyData make_two_blobs(int per_class, double separation, std::uint64_t seed);

/// Gaussian blobs for num_classes classes placed deterministically on a
/// circle of the given radius.
ToyData make_blobs(int num_classes, int per_class, double radius, Rng& rng);

/// Euclidean distances between the rows of a (or of a and b).
DistanceMatrix pairwise_distances(const Matrix& points);
Matrix pairwise_distances(const Matrix& a, const Matrix& b);

/// Random symmetric PSD matrix with eigenvalues uniform in
/// [min_eig, max_eig], via a random orthogonal basis.
Matrix random_psd(Index n, Rng& rng, double min_eig = 0.1, double max_eig = 2.0);

/// Random kernel matrix wrapper around random_psd.
KernelMatrix random_psd_kernel(Index n, Rng& rng, double min_eig = 0.1,
                               double max_eig = 2.0);

/// Random labels 1..num_classes with every class occupied.
std::vector<int> random_labels(Index n, int num_classes, Rng& rng);

/// A kernel aligned with the given labels: block structure plus noise.
/// Useful for selection experiments where one kernel carries signal.
KernelMatrix label_aligned_kernel(const std::vector<int>& labels, Rng& rng,
                                  double noise = 0.05);

}  // namespace mklrt

#endif  // MKLRT_TOY_HPP
