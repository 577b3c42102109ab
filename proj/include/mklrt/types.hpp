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

#ifndef MKLRT_TYPES_HPP
#define MKLRT_TYPES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mklrt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative symmetry tolerance used when validating Gram matrices:
/// max |K - K^T| entry must not exceed this times max |K| entry.
inline constexpr double kSymmetryTol = 1e-9;

/// PSD slack: smallest eigenvalue may be as low as -kPsdTol * trace/N.
inline constexpr double kPsdTol = 1e-8;

/// Simplex weights must sum to one within this.
inline constexpr double kSimplexSumTol = 1e-12;

/// Dense symmetric Gram matrix over N training items. Immutable by
/// convention: operations take const references and return new values.
struct KernelMatrix {
  Matrix values;                      // N x N, symmetric
  std::vector<std::string> item_ids;  // size N

  Index size() const { return values.rows(); }
};

/// Kernel evaluations between N_test out-of-sample items (rows) and the
/// N_train items of a paired KernelMatrix (columns).
struct CrossKernelMatrix {
  Matrix values;  // N_test x N_train
  std::vector<std::string> test_ids;
  std::vector<std::string> train_ids;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

/// Convex combination weights over M base kernels: entries >= 0, sum 1.
struct SimplexWeights {
  Vector mu;

  Index size() const { return mu.size(); }
  static SimplexWeights uniform(Index m);
  static SimplexWeights unit(Index m, Index index);  // one-hot
};

/// Pairwise distances: symmetric, nonnegative, exactly zero diagonal.
struct DistanceMatrix {
  Matrix values;

  Index size() const { return values.rows(); }
};

/// Class assignments remapped to 1..P with every class occupied.
struct LabelVector {
  std::vector<int> labels;  // values in 1..num_classes
  int num_classes = 0;

  Index size() const { return static_cast<Index>(labels.size()); }
};

/// How base kernels are merged into one: convex sum (MKL, average, best
/// individual) or entrywise weighted geometric mean (product baseline).
enum class CombineRule { linear, product };

// --- validating factories -------------------------------------------------

/// Checks squareness and symmetry; generates "0".."N-1" ids when none
/// are supplied. Asymmetry within tolerance is squared away exactly by
/// (K + K^T)/2 so downstream code can rely on bitwise symmetry.
KernelMatrix make_kernel(Matrix values, std::vector<std::string> item_ids = {});

CrossKernelMatrix make_cross_kernel(Matrix values,
                                    std::vector<std::string> test_ids = {},
                                    std::vector<std::string> train_ids = {});

SimplexWeights make_simplex_weights(Vector mu);

DistanceMatrix make_distance_matrix(Matrix values);

/// Remaps arbitrary integer class ids to 1..P by ascending value.
LabelVector make_label_vector(const std::vector<int>& raw_labels);

// --- checks ---------------------------------------------------------------

/// Smallest eigenvalue of k, for on-demand PSD validation.
double min_eigenvalue(const Matrix& symmetric);

/// True when min eigenvalue >= -kPsdTol * trace/N.
bool is_psd(const KernelMatrix& k, double* min_eig_out = nullptr);

/// Per-class item counts, indexed by class-1.
std::vector<int> class_counts(const LabelVector& y);

/// Largest absolute asymmetry max |m - m^T|.
double asymmetry(const Matrix& m);

}  // namespace mklrt

#endif  // MKLRT_TYPES_HPP
