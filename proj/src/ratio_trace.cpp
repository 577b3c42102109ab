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

#include "mklrt/ratio_trace.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "mklrt/errors.hpp"

namespace mklrt {

namespace {

void check_symmetric(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw validation_error(std::string(name) + " must be square");
  }
  const double scale = std::max(m.size() ? m.cwiseAbs().maxCoeff() : 0.0, 1.0);
  if (asymmetry(m) > kSymmetryTol * scale) {
    throw validation_error(std::string(name) + " is not symmetric within tolerance");
  }
}

Matrix symmetrized(const Matrix& m) { return (m + m.transpose()) * 0.5; }

}  // namespace

RatioTraceInstance make_ratio_trace_instance(KernelMatrix k, Matrix l, Matrix lp,
                                             double sigma) {
  check_symmetric(l, "L");
  check_symmetric(lp, "L'");
  const Index n = k.size();
  if (l.rows() != n || lp.rows() != n) {
    throw validation_error("L and L' must match the kernel size");
  }
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw validation_error("sigma must lie strictly inside (0, 1)");
  }
  if (l.cwiseAbs().maxCoeff() == 0.0) {
    throw validation_error("L must be nonzero");
  }
  return RatioTraceInstance{std::move(k), symmetrized(l), symmetrized(lp), sigma};
}

PsdEigen psd_eigenfactor(const Matrix& m, double tau) {
  check_symmetric(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m));
  if (es.info() != Eigen::Success) {
    throw numerical_error("symmetric eigendecomposition failed");
  }
  const Vector& vals = es.eigenvalues();  // ascending
  const double cutoff = tau * std::max(vals[vals.size() - 1], 0.0);
  Index keep = 0;
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] > cutoff && vals[i] > 0.0) ++keep;
  }
  PsdEigen out;
  out.eigenvalues = Vector(keep);
  out.eigenvectors = Matrix(m.rows(), keep);
  // Reverse to descending order.
  for (Index i = 0; i < keep; ++i) {
    const Index src = vals.size() - 1 - i;
    out.eigenvalues[i] = vals[src];
    out.eigenvectors.col(i) = es.eigenvectors().col(src);
  }
  return out;
}

PsdFactor factor_pencil_sides(const Matrix& l, const Matrix& lp, double tau) {
  const PsdEigen el = psd_eigenfactor(l, tau);
  const PsdEigen ep = psd_eigenfactor(lp, tau);
  PsdFactor f;
  f.G = el.eigenvectors * el.eigenvalues.cwiseSqrt().asDiagonal();
  f.H = ep.eigenvectors * ep.eigenvalues.cwiseSqrt().asDiagonal();
  return f;
}

GevdResult solve_pencil(const Matrix& a, const Matrix& b, std::optional<int> dims,
                        double tau, bool allow_jitter) {
  check_symmetric(a, "A");
  check_symmetric(b, "B");
  if (a.rows() != b.rows()) throw validation_error("pencil sides differ in size");
  const Index n = a.rows();

  GevdResult result;
  Matrix b_eff = symmetrized(b);
  Eigen::LLT<Matrix> llt(b_eff);
  // A tiny pivot passes LLT but destroys the reduction; treat it as
  // singular too.
  const double pivot_floor = std::sqrt(kJitterScale * std::max(b_eff.trace(), 0.0) /
                                       static_cast<double>(n));
  auto usable = [&](const Eigen::LLT<Matrix>& f) {
    return f.info() == Eigen::Success &&
           f.matrixLLT().diagonal().minCoeff() > pivot_floor;
  };
  if (!usable(llt)) {
    if (!allow_jitter) {
      throw numerical_error("right-hand pencil matrix is not positive definite");
    }
    result.jittered = true;
    result.jitter = kJitterScale * std::max(b_eff.trace(), 0.0) / static_cast<double>(n);
    if (!(result.jitter > 0.0)) {
      throw numerical_error("right-hand pencil matrix has nonpositive trace");
    }
    b_eff.diagonal().array() += result.jitter;
    llt.compute(b_eff);
    if (llt.info() != Eigen::Success) {
      throw numerical_error("Cholesky factorization failed even after jitter");
    }
  }

  // Reduce: C = L^-1 A L^-T, then gamma = L^-T y keeps Gamma^T B Gamma = I.
  const Matrix l_factor = llt.matrixL();
  Matrix c = l_factor.triangularView<Eigen::Lower>().solve(symmetrized(a));
  c = l_factor.triangularView<Eigen::Lower>().solve(c.transpose().eval());
  c = symmetrized(c);

  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  if (es.info() != Eigen::Success) {
    throw numerical_error("eigendecomposition of the reduced pencil failed");
  }
  const Vector& vals = es.eigenvalues();  // ascending
  const double lambda_max = vals[vals.size() - 1];
  const double cutoff = tau * std::max(lambda_max, 0.0);
  Index r = 0;
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] > cutoff && vals[i] > 0.0) ++r;
  }
  if (dims) {
    if (*dims < 1) throw validation_error("dims must be positive");
    r = std::min<Index>(r, *dims);
  }

  result.lambda = Vector(r);
  Matrix y(n, r);
  for (Index i = 0; i < r; ++i) {
    const Index src = vals.size() - 1 - i;
    result.lambda[i] = vals[src];
    y.col(i) = es.eigenvectors().col(src);
  }
  result.gamma = l_factor.transpose().triangularView<Eigen::Upper>().solve(y);
  result.objective = result.lambda.sum();
  return result;
}

GevdResult solve_generic_ratio_trace(const Matrix& s1, const Matrix& s2) {
  return solve_pencil(s2, s1, std::nullopt, kRankTol, /*allow_jitter=*/false);
}

GevdResult solve_gevd_pencil(const RatioTraceInstance& inst, std::optional<int> dims) {
  const Matrix& k = inst.K.values;
  const Matrix a = symmetrized(k * inst.Lp * k);
  const Matrix b = symmetrized((1.0 - inst.sigma) * (k * inst.L * k) + inst.sigma * k);
  return solve_pencil(a, b, dims);
}

double ratio_trace_value(const Matrix& a, const Matrix& b, const Matrix& gamma) {
  if (gamma.cols() == 0) return 0.0;
  const Matrix gbg = gamma.transpose() * b * gamma;
  const Matrix gag = gamma.transpose() * a * gamma;
  return gbg.fullPivLu().solve(gag).trace();
}

double pencil_residual(const Matrix& a, const Matrix& b, const GevdResult& r) {
  const double a_norm = a.norm();
  double worst = 0.0;
  for (Index i = 0; i < r.rank(); ++i) {
    const Vector g = r.gamma.col(i);
    const double res = (a * g - r.lambda[i] * (b * g)).norm();
    worst = std::max(worst, res / (std::max(a_norm, 1e-300) * g.norm()));
  }
  return worst;
}

}  // namespace mklrt
