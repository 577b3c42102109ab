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

#ifndef MKLRT_KERNEL_OPS_HPP
#define MKLRT_KERNEL_OPS_HPP

#include <cstddef>
#include <vector>

#include "mklrt/types.hpp"

namespace mklrt {

/// Convex combination K = sum_m mu_m K^m. All kernels must share size
/// and item order. The result is symmetrized exactly as (A + A^T)/2.
KernelMatrix combine(const SimplexWeights& weights,
                     const std::vector<KernelMatrix>& kernels);

/// Entrywise weighted geometric mean prod_m (K^m)^{mu_m}. Every entry of
/// every kernel must be strictly positive.
KernelMatrix combine_product(const SimplexWeights& weights,
                             const std::vector<KernelMatrix>& kernels);

/// Same combination rules applied to out-of-sample rows.
Matrix combine_cross(CombineRule rule, const SimplexWeights& weights,
                     const std::vector<CrossKernelMatrix>& kernels);

/// Kernel-induced distance d^2(i,j) = K(i,i) + K(j,j) - K(i,j) - K(j,i).
/// Negative d^2 (possible for indefinite inputs) is clamped to zero; the
/// clamp count is logged and also written to *clamped_out when given.
DistanceMatrix distance_from_kernel(const KernelMatrix& k,
                                    std::size_t* clamped_out = nullptr);

/// Mean of the off-diagonal entries of d; the RBF bandwidth eta.
double rbf_bandwidth(const DistanceMatrix& d);

/// K(i,j) = exp(-d(i,j)/eta) with eta = rbf_bandwidth(d). Fails when all
/// distances are zero (eta would be zero).
KernelMatrix rbf_from_distance(const DistanceMatrix& d);

/// Out-of-sample companion: exp(-d/eta) applied to test-vs-train
/// distances using the bandwidth fitted on training distances.
CrossKernelMatrix rbf_cross_from_distance(const Matrix& distances, double eta,
                                          std::vector<std::string> test_ids = {},
                                          std::vector<std::string> train_ids = {});

/// Feature-space centering H K H with H = I - (1/N) 1 1^T.
KernelMatrix center_train(const KernelMatrix& k);

/// Centering of test rows consistent with center_train:
/// (K_t - (1/N) 1 1^T K) H. Reduces to rows of center_train(K) when the
/// test rows are rows of K.
CrossKernelMatrix center_cross(const CrossKernelMatrix& kt, const KernelMatrix& k_train);

/// center_cross given only the training column means (what a saved model
/// carries instead of the full training kernel).
Matrix center_cross_values(const Matrix& kt, const Vector& train_col_means);

/// Scales k so that trace(k) = N.
KernelMatrix normalize_trace(const KernelMatrix& k);

}  // namespace mklrt

#endif  // MKLRT_KERNEL_OPS_HPP
