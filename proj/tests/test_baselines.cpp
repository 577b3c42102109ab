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
#include <limits>

#include "mklrt/baselines.hpp"
#include "mklrt/errors.hpp"
#include "mklrt/eval.hpp"
#include "mklrt/kernel_ops.hpp"
#include "testutil.hpp"

using namespace mklrt;

TEST_CASE("average_kernel: entrywise mean") {
  const KernelMatrix a = make_kernel(Matrix::Constant(1, 1, 2.0));
  const KernelMatrix b = make_kernel(Matrix::Constant(1, 1, 4.0));
  CHECK(average_kernel({a, b}).values(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(average_kernel({a}).values(0, 0) == 2.0);

  Rng rng(501);
  const auto kernels = testutil::random_kernel_set(8, 3, rng);
  CHECK(is_psd(average_kernel(kernels)));
}

TEST_CASE("product_kernel: entrywise geometric mean") {
  const KernelMatrix a = make_kernel(Matrix::Constant(1, 1, 4.0));
  const KernelMatrix b = make_kernel(Matrix::Constant(1, 1, 1.0));
  CHECK(product_kernel({a, b}).values(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(product_kernel({a}).values(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  const KernelMatrix zero = make_kernel(Matrix::Zero(1, 1));
  CHECK_THROWS_AS(product_kernel({a, zero}), validation_error);

  // Symmetric output with positive entries.
  Rng rng(503);
  const ToyData toy = make_two_blobs(6, 4.0, 9);
  const KernelMatrix k1 = rbf_from_distance(pairwise_distances(toy.points));
  KernelMatrix k2 = k1;
  k2.values = k2.values.array().pow(1.3);
  k2 = make_kernel(k2.values, k2.item_ids);
  const KernelMatrix p = product_kernel({k1, k2});
  CHECK(asymmetry(p.values) == 0.0);
  CHECK((p.values.array() > 0.0).all());
  (void)rng;
}

TEST_CASE("best_individual_kernel: argmax with ties to the smallest index") {
  Rng rng(509);
  const auto kernels = testutil::random_kernel_set(5, 3, rng);
  const std::vector<double> scores = {0.3, 0.9, 0.5};
  CHECK(best_individual_kernel(kernels, [&](int m, const KernelMatrix&) {
          return scores[static_cast<std::size_t>(m)];
        }) == 1);
  CHECK(best_individual_kernel({kernels[0]}, [](int, const KernelMatrix&) {
          return 0.42;
        }) == 0);
  CHECK(best_individual_kernel(kernels, [](int, const KernelMatrix&) {
          return 0.5;  // all tied
        }) == 0);
  CHECK_THROWS_AS(best_individual_kernel(kernels,
                                         [](int, const KernelMatrix&) {
                                           return std::numeric_limits<double>::quiet_NaN();
                                         }),
                  numerical_error);
}

TEST_CASE("baseline fits go through the same pencil path as the MKL fit") {
  Rng rng(515);
  const Index n = 10;
  const KernelMatrix k = random_psd_kernel(n, rng);
  InstanceSpec spec;
  spec.task = Task::kfda;
  spec.sigma = 0.45;
  SideInputs side;
  side.labels_x = make_label_vector(random_labels(n, 3, rng));

  const EmbeddingModel via_baseline = fit_with_combined(
      spec, average_kernel({k}), side, SimplexWeights::uniform(1), CombineRule::linear);
  SolverConfig cfg;
  const EmbeddingModel via_mkl = mkl_rt_fit(spec, {k}, side, cfg).model;
  REQUIRE(via_baseline.rank() == via_mkl.rank());
  for (Index i = 0; i < via_mkl.rank(); ++i) {
    CHECK(via_baseline.lambda[i] == doctest::Approx(via_mkl.lambda[i]).epsilon(1e-8));
  }
}

TEST_CASE("product-combined models project through the geometric mean") {
  const ToyData toy = make_two_blobs(6, 5.0, 41);
  const DistanceMatrix d = pairwise_distances(toy.points);
  const KernelMatrix k1 = rbf_from_distance(d);
  KernelMatrix k2 = k1;
  k2.values = k2.values.array().pow(0.7);

  InstanceSpec spec;
  spec.task = Task::kfda;
  spec.sigma = 0.5;
  SideInputs side;
  side.labels_x = make_label_vector(toy.labels);
  const SimplexWeights mu = SimplexWeights::uniform(2);
  const KernelMatrix pk = product_kernel({k1, k2});
  const EmbeddingModel model =
      fit_with_combined(spec, pk, side, mu, CombineRule::product);

  std::vector<CrossKernelMatrix> rows;
  for (const auto& k : {k1, k2}) {
    rows.push_back(make_cross_kernel(k.values, k.item_ids, k.item_ids));
  }
  const Matrix latents = project(model, rows, View::first);
  CHECK(testutil::approx_equal(latents, pk.values * model.gamma, 1e-12));
}

TEST_CASE("best_individual_kernel picks the label-aligned kernel under CV accuracy") {
  Rng rng(521);
  const Index n = 18;
  const std::vector<int> labels = random_labels(n, 2, rng);
  const KernelMatrix aligned = label_aligned_kernel(labels, rng);
  const KernelMatrix noise = random_psd_kernel(n, rng);

  InstanceSpec spec;
  spec.task = Task::kfda;
  spec.sigma = 0.5;
  SideInputs side;
  side.labels_x = make_label_vector(labels);
  CvOptions options;
  options.folds = 3;
  options.seed = 7;
  SolverConfig solver;
  solver.sigma = spec.sigma;

  const auto selector = [&](int, const KernelMatrix& k) {
    CvFit fit;
    fit.fixed_mu = SimplexWeights::uniform(1);
    return cv_score(spec, {k}, side, options, fit, solver);
  };
  CHECK(best_individual_kernel({aligned, noise}, selector) == 0);
}
