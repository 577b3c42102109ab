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

#include <doctest.h>

#include <cmath>

#include "mklrt/errors.hpp"
#include "mklrt/kernel_ops.hpp"
#include "testutil.hpp"

using namespace mklrt;

TEST_CASE("combine: hand-checked cases") {
  const KernelMatrix k1 = make_kernel(testutil::mat2(2, 1, 1, 2));
  CHECK(testutil::approx_equal(combine(SimplexWeights::uniform(1), {k1}).values,
                               k1.values, 0.0));

  const KernelMatrix id = make_kernel(Matrix::Identity(2, 2));
  const KernelMatrix ones = make_kernel(Matrix::Ones(2, 2));
  Vector half(2);
  half << 0.5, 0.5;
  const KernelMatrix mixed = combine(make_simplex_weights(half), {id, ones});
  CHECK(testutil::approx_equal(mixed.values, testutil::mat2(1, 0.5, 0.5, 1), 1e-15));

  Vector w(2);
  w << 0.2, 0.8;
  const KernelMatrix a = make_kernel(Matrix::Constant(1, 1, 3.0));
  const KernelMatrix b = make_kernel(Matrix::Constant(1, 1, 8.0));
  CHECK(combine(make_simplex_weights(w), {a, b}).values(0, 0) ==
        doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("combine: errors") {
  const KernelMatrix k1 = make_kernel(Matrix::Identity(2, 2));
  const KernelMatrix k3 = make_kernel(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(combine(SimplexWeights::uniform(2), {k1, k3}), validation_error);
  CHECK_THROWS_AS(combine(SimplexWeights::uniform(1), {}), validation_error);
  CHECK_THROWS_AS(combine(SimplexWeights::uniform(2), {k1}), validation_error);
}

TEST_CASE("combine keeps PSD and exact symmetry on random PSD inputs") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const auto kernels = testutil::random_kernel_set(12, 3, rng);
    Vector w(3);
    w << rng.uniform(), rng.uniform(), rng.uniform();
    w /= w.sum();
    const KernelMatrix k = combine(SimplexWeights{w}, kernels);
    CHECK(asymmetry(k.values) == 0.0);
    CHECK(is_psd(k));
  }
}

TEST_CASE("distance_from_kernel: hand-checked cases") {
  std::size_t clamped = 999;
  const DistanceMatrix d1 =
      distance_from_kernel(make_kernel(Matrix::Identity(2, 2)), &clamped);
  CHECK(d1.values(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d1.values(0, 0) == 0.0);
  CHECK(clamped == 0);

  const DistanceMatrix d2 = distance_from_kernel(make_kernel(testutil::mat2(4, 2, 2, 1)));
  CHECK(d2.values(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

  const DistanceMatrix d3 = distance_from_kernel(make_kernel(Matrix::Ones(3, 3)));
  CHECK(d3.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("distance_from_kernel: PSD inputs give d^2 >= -1e-9 and clamps are counted") {
  Rng rng(23);
  for (int rep = 0; rep < 8; ++rep) {
    const KernelMatrix k = random_psd_kernel(10, rng);
    // Independent recomputation of the squared distances.
    for (Index i = 0; i < k.size(); ++i) {
      for (Index j = 0; j < k.size(); ++j) {
        const double d2 = k.values(i, i) + k.values(j, j) - 2.0 * k.values(i, j);
        CHECK(d2 >= -1e-9);
      }
    }
    const DistanceMatrix d = distance_from_kernel(k);
    CHECK(asymmetry(d.values) == 0.0);
    CHECK(d.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.values.array() >= 0.0).all());
  }

  // An indefinite "kernel" must get clamped and reported, not rejected.
  Matrix bad(2, 2);
  bad << 0.0, 1.0, 1.0, 0.0;
  std::size_t clamped = 0;
  const DistanceMatrix d = distance_from_kernel(make_kernel(bad), &clamped);
  CHECK(clamped == 2);
  CHECK(d.values(0, 1) == 0.0);
}

TEST_CASE("rbf_from_distance: analytic 2x2 and 3x3 cases") {
  const KernelMatrix k = rbf_from_distance(make_distance_matrix(testutil::mat2(0, 2, 2, 0)));
  CHECK(k.values(0, 0) == 1.0);
  CHECK(k.values(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  Matrix d3(3, 3);
  d3 << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  const KernelMatrix k3 = rbf_from_distance(make_distance_matrix(d3));
  // eta = mean of off-diagonal entries {1,2,3} = 2.
  CHECK(k3.values(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(k3.values(1, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-15));

  CHECK_THROWS_AS(rbf_from_distance(make_distance_matrix(Matrix::Zero(3, 3))),
                  validation_error);
}

TEST_CASE("rbf_from_distance output has unit diagonal and entries in (0,1]") {
  Rng rng(5);
  const ToyData toy = make_two_blobs(10, 3.0, 17);
  const DistanceMatrix d = pairwise_distances(toy.points);
  const KernelMatrix k = rbf_from_distance(d);
  CHECK((k.values.diagonal().array() == 1.0).all());
  CHECK((k.values.array() > 0.0).all());
  CHECK((k.values.array() <= 1.0).all());
  (void)rng;
}

TEST_CASE("center_train: hand-checked cases and idempotence") {
  CHECK(center_train(make_kernel(Matrix::Ones(3, 3))).values.cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-15));
  const KernelMatrix c1 = center_train(make_kernel(Matrix::Identity(2, 2)));
  CHECK(testutil::approx_equal(c1.values, testutil::mat2(0.5, -0.5, -0.5, 0.5), 1e-15));
  const KernelMatrix c2 = center_train(make_kernel(testutil::mat2(2, 0, 0, 0)));
  CHECK(testutil::approx_equal(c2.values, testutil::mat2(0.5, -0.5, -0.5, 0.5), 1e-15));

  Rng rng(29);
  const KernelMatrix k = random_psd_kernel(9, rng);
  const KernelMatrix once = center_train(k);
  const KernelMatrix twice = center_train(once);
  const double scale = k.values.cwiseAbs().maxCoeff();
  CHECK(testutil::approx_equal(once.values, twice.values, 1e-9 * scale));
  // Every row/column of the centered kernel sums to zero.
  CHECK(once.values.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9 * 9 * scale);
  CHECK(once.values.colwise().sum().cwiseAbs().maxCoeff() <= 1e-9 * 9 * scale);
}

TEST_CASE("center_cross is consistent with center_train") {
  Rng rng(31);
  const KernelMatrix k = random_psd_kernel(7, rng);
  const KernelMatrix centered = center_train(k);

  // Rows of the training kernel center to rows of the centered kernel.
  const CrossKernelMatrix kt = make_cross_kernel(k.values, k.item_ids, k.item_ids);
  const CrossKernelMatrix ct = center_cross(kt, k);
  CHECK(testutil::approx_equal(ct.values, centered.values, 1e-12));

  // A test row equal to the training column means centers to zero.
  Matrix mean_row = k.values.colwise().mean();
  const CrossKernelMatrix zero_row =
      center_cross(make_cross_kernel(mean_row, {"t"}, k.item_ids), k);
  CHECK(zero_row.values.cwiseAbs().maxCoeff() <= 1e-12);

  // Hand-checked 2x2 case.
  Matrix row(1, 2);
  row << 1, 0;
  const CrossKernelMatrix c =
      center_cross(make_cross_kernel(row, {"t"}, {"0", "1"}),
                   make_kernel(Matrix::Identity(2, 2)));
  Matrix expect(1, 2);
  expect << 0.5, -0.5;
  CHECK(testutil::approx_equal(c.values, expect, 1e-15));
}

TEST_CASE("normalize_trace") {
  CHECK(testutil::approx_equal(normalize_trace(make_kernel(Matrix::Identity(3, 3))).values,
                               Matrix::Identity(3, 3), 0.0));
  CHECK(testutil::approx_equal(
      normalize_trace(make_kernel(2.0 * Matrix::Identity(2, 2))).values,
      Matrix::Identity(2, 2), 1e-15));
  CHECK(normalize_trace(make_kernel(Matrix::Constant(1, 1, 4.0))).values(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(normalize_trace(make_kernel(Matrix::Zero(2, 2))), validation_error);
}

TEST_CASE("combine_product needs positive entries") {
  const KernelMatrix a = make_kernel(Matrix::Constant(1, 1, 4.0));
  const KernelMatrix b = make_kernel(Matrix::Constant(1, 1, 1.0));
  CHECK(combine_product(SimplexWeights::uniform(2), {a, b}).values(0, 0) ==
        doctest::Approx(2.0).epsilon(1e-15));
  const KernelMatrix zero = make_kernel(Matrix::Zero(1, 1));
  CHECK_THROWS_AS(combine_product(SimplexWeights::uniform(2), {a, zero}),
                  validation_error);
}
