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

#ifndef MKLRT_RATIO_TRACE_HPP
#define MKLRT_RATIO_TRACE_HPP

#include <optional>

#include "mklrt/types.hpp"

namespace mklrt {

/// Eigenvalues below kRankTol times the largest one count as zero.
inline constexpr double kRankTol = 1e-10;

/// Jitter scale added to a numerically singular right-hand side matrix:
/// delta * (trace(B)/N) * I, applied at most once.
inline constexpr double kJitterScale = 1e-10;

/// One ratio-trace problem over a (combined) kernel:
///   maximize_Gamma trace[(Gamma^T B Gamma)^-1 (Gamma^T A Gamma)]
/// with A = K L' K and B = (1-sigma) K L K + sigma K.
struct RatioTraceInstance {
  KernelMatrix K;
  Matrix L;       // N x N symmetric PSD, nonzero
  Matrix Lp;      // N x N symmetric PSD
  double sigma;   // in (0, 1)
};

/// Validates shapes, symmetry (1e-9 relative), L != 0 and sigma range.
RatioTraceInstance make_ratio_trace_instance(KernelMatrix k, Matrix l, Matrix lp,
                                             double sigma);

/// Eigenpairs of a symmetric PSD matrix above the rank tolerance,
/// eigenvalues descending, eigenvectors orthonormal.
struct PsdEigen {
  Vector eigenvalues;
  Matrix eigenvectors;  // N x l, columns aligned with eigenvalues

  Index rank() const { return eigenvalues.size(); }
};
PsdEigen psd_eigenfactor(const Matrix& m, double tau = kRankTol);

/// Square-root factors of the pencil sides: G G^T = L with columns
/// sqrt(alpha_i) u_i, and columns h_i = sqrt(beta_i) v_i of H with
/// sum_i h_i h_i^T = L'.
struct PsdFactor {
  Matrix G;  // N x l
  Matrix H;  // N x l'

  Index rank_l() const { return G.cols(); }
  Index rank_lp() const { return H.cols(); }
};
PsdFactor factor_pencil_sides(const Matrix& l, const Matrix& lp, double tau = kRankTol);

/// Generalized eigenpairs A gamma = lambda B gamma, eigenvalues positive
/// and descending, Gamma B-orthonormal (Gamma^T B Gamma = I).
struct GevdResult {
  Matrix gamma;
  Vector lambda;
  double objective = 0.0;  // sum of lambda
  bool jittered = false;   // B was singular; jitter * I was added
  double jitter = 0.0;

  Index rank() const { return lambda.size(); }
};

/// Pencil (A, B) solved by symmetric-definite reduction with the
/// Cholesky factor of B. When the factorization fails and allow_jitter
/// is set, a single jitter of kJitterScale * trace(B)/N is added and
/// recorded in the result; otherwise the failure raises. `dims` caps the
/// returned pairs to the top min(dims, r).
GevdResult solve_pencil(const Matrix& a, const Matrix& b,
                        std::optional<int> dims = std::nullopt,
                        double tau = kRankTol, bool allow_jitter = true);

/// Plain ratio-trace maximize trace[(W^T S1 W)^-1 (W^T S2 W)]: the
/// generalized eigenpairs of (S2, S1). S1 must be positive definite.
GevdResult solve_generic_ratio_trace(const Matrix& s1, const Matrix& s2);

/// The kernelized pencil K L' K gamma = lambda ((1-sigma) K L K + sigma K) gamma.
GevdResult solve_gevd_pencil(const RatioTraceInstance& inst,
                             std::optional<int> dims = std::nullopt);

/// trace[(Gamma^T B Gamma)^-1 (Gamma^T A Gamma)] recomputed from scratch;
/// equals the objective of a correct GEVD result.
double ratio_trace_value(const Matrix& a, const Matrix& b, const Matrix& gamma);

/// max_i ||A g_i - lambda_i B g_i|| / (||A||_F ||g_i||): the pencil
/// residual the result invariants are stated against.
double pencil_residual(const Matrix& a, const Matrix& b, const GevdResult& r);

}  // namespace mklrt

#endif  // MKLRT_RATIO_TRACE_HPP
