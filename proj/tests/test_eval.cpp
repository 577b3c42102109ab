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
#include "mklrt/eval.hpp"
#include "mklrt/kernel_ops.hpp"
#include "testutil.hpp"

using namespace mklrt;

TEST_CASE("nn_classify: exact hits, 1-D ordering, tie rule") {
  Matrix train(2, 1);
  train << 0, 10;
  const std::vector<int> labels = {1, 2};

  Matrix exact(1, 1);
  exact << 10;
  CHECK(nn_classify(train, labels, exact, Metric::euclidean) == std::vector<int>{2});

  Matrix near(1, 1);
  near << 1;
  CHECK(nn_classify(train, labels, near, Metric::euclidean) == std::vector<int>{1});

  Matrix mid(1, 1);
  mid << 5;  // equidistant: smaller training index wins
  CHECK(nn_classify(train, labels, mid, Metric::euclidean) == std::vector<int>{1});

  CHECK_THROWS_AS(nn_classify(Matrix(0, 1), {}, mid, Metric::euclidean),
                  validation_error);
}

TEST_CASE("nn_classify is invariant under joint isometry") {
  Rng rng(601);
  Matrix train(8, 2), test(5, 2);
  for (Index i = 0; i < train.rows(); ++i) {
    train(i, 0) = rng.gaussian();
    train(i, 1) = rng.gaussian();
  }
  for (Index i = 0; i < test.rows(); ++i) {
    test(i, 0) = rng.gaussian();
    test(i, 1) = rng.gaussian();
  }
  const std::vector<int> labels = {1, 2, 1, 2, 1, 2, 1, 2};
  const auto base = nn_classify(train, labels, test, Metric::euclidean);

  const double a = 1.1;
  Matrix rot(2, 2);
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  Matrix shift = Matrix::Constant(1, 2, 3.7);
  const Matrix train_t = (train * rot).rowwise() + shift.row(0);
  const Matrix test_t = (test * rot).rowwise() + shift.row(0);
  CHECK(nn_classify(train_t, labels, test_t, Metric::euclidean) == base);
}

TEST_CASE("mean_per_class_accuracy: hand cases") {
  // class 1: 2/2, class 2: 0/1 -> 0.5
  const EvalReport r1 = mean_per_class_accuracy({1, 1, 2}, {1, 1, 1});
  CHECK(r1.mean_per_class == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.per_class_accuracy.at(1) == 1.0);
  CHECK(r1.per_class_accuracy.at(2) == 0.0);

  CHECK(mean_per_class_accuracy({1, 2}, {1, 2}).mean_per_class == 1.0);
  CHECK(mean_per_class_accuracy({1, 2}, {2, 1}).mean_per_class == 0.0);

  // The aggregate equals the mean of the per-class rates.
  double sum = 0.0;
  for (const auto& [cls, acc] : r1.per_class_accuracy) sum += acc;
  CHECK(std::abs(r1.mean_per_class - sum / r1.per_class_accuracy.size()) <= 1e-12);
}

TEST_CASE("retrieve_cosine: direction match, orthogonality, scale invariance") {
  Matrix gallery(3, 2);
  gallery << 1, 0,   // same direction as the query
             0, 1,   // orthogonal
             2, 0.1; // near the query direction
  Vector q(2);
  q << 1, 0;
  const auto order = retrieve_cosine(q, gallery);
  CHECK(order[0] == 0);
  CHECK(order.back() == 1);

  const auto scaled = retrieve_cosine(5.0 * q, gallery);
  CHECK(order == scaled);

  // Zero gallery vectors rank last, by index.
  Matrix with_zero(3, 2);
  with_zero << 0, 0, 1, 0, 0, 0;
  const auto z = retrieve_cosine(q, with_zero);
  CHECK(z == std::vector<int>{1, 0, 2});
}

TEST_CASE("average_precision: exact textbook values") {
  CHECK(average_precision({1, 0, 1}) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(average_precision({1, 1, 1}) == 1.0);
  CHECK(average_precision({0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(average_precision({0, 0}), validation_error);
}

TEST_CASE("average_precision never improves when a relevant item moves down") {
  Rng rng(607);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> rel(10);
    int ones = 0;
    for (auto& r : rel) {
      r = rng.uniform() < 0.4;
      ones += r;
    }
    if (ones == 0) rel[0] = 1;
    const double base = average_precision(rel);
    // Swap one relevant item downward past an irrelevant neighbor.
    for (std::size_t i = 0; i + 1 < rel.size(); ++i) {
      if (rel[i] == 1 && rel[i + 1] == 0) {
        std::vector<int> worse = rel;
        std::swap(worse[i], worse[i + 1]);
        CHECK(average_precision(worse) <= base + 1e-15);
        break;
      }
    }
  }
}

TEST_CASE("mean_average_precision") {
  CHECK(mean_average_precision({1.0, 0.5}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(mean_average_precision({0.3}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(mean_average_precision({}), validation_error);
}

TEST_CASE("retrieval_map: perfect separation gives MAP 1, skips are counted") {
  Matrix queries(2, 2);
  queries << 1, 0, 0, 1;
  Matrix gallery(3, 2);
  gallery << 1, 0.01, 0.01, 1, 1, -0.01;
  const EvalReport r = retrieval_map(queries, {1, 2}, gallery, {1, 2, 1});
  CHECK(r.map == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.skipped_queries == 0);
  CHECK(std::abs(r.map - (r.per_query_ap[0] + r.per_query_ap[1]) / 2.0) <= 1e-12);

  // A query class absent from the gallery is skipped with a warning.
  const EvalReport r2 = retrieval_map(queries, {1, 3}, gallery, {1, 2, 1});
  CHECK(r2.skipped_queries == 1);
  CHECK(r2.per_query_ap.size() == 1);
}

TEST_CASE("stratified_folds spreads classes and items") {
  const std::vector<int> labels = {1, 1, 1, 1, 2, 2, 2, 2, 2, 2};
  const auto folds = stratified_folds(labels, 2, 3);
  REQUIRE(folds.size() == labels.size());
  int c1_f0 = 0, c2_f0 = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (folds[i] == 0) (labels[i] == 1 ? c1_f0 : c2_f0)++;
  }
  CHECK(c1_f0 == 2);
  CHECK(c2_f0 == 3);
  // Deterministic for a fixed seed.
  CHECK(stratified_folds(labels, 2, 3) == folds);
}

TEST_CASE("cross_validate_sigma: single point, degenerate losers, ties to larger sigma") {
  const ToyData toy = make_two_blobs(10, 10.0, 77);
  // Centered kernel: the discriminant direction then leads the spectrum.
  const KernelMatrix k = center_train(rbf_from_distance(pairwise_distances(toy.points)));
  InstanceSpec spec;
  spec.task = Task::kfda;
  SideInputs side;
  side.labels_x = make_label_vector(toy.labels);
  CvOptions options;
  options.folds = 2;
  options.seed = 5;
  CvFit fit;
  fit.fixed_mu = SimplexWeights::uniform(1);
  SolverConfig solver;

  CHECK(cross_validate_sigma(spec, {k}, side, {0.3}, options, fit, solver) == 0.3);

  // Separable blobs: accuracy 1.0 across the grid, so the tie rule
  // returns the largest sigma.
  CHECK(cross_validate_sigma(spec, {k}, side, {0.1, 0.5, 0.9}, options, fit, solver) ==
        0.9);
}

TEST_CASE("degenerate rank-0 folds score zero, so any non-degenerate sigma wins") {
  // A zero second-view kernel collapses the kcca pencil to rank 0 on
  // every fold; the score must be 0 rather than an error.
  Rng rng(613);
  const KernelMatrix kx = random_psd_kernel(8, rng);
  KernelMatrix kz = kx;
  kz.values.setZero();
  InstanceSpec spec;
  spec.task = Task::kcca;
  spec.sigma = 0.5;
  SideInputs side;
  side.kernel_z = kz;
  CvOptions options;
  options.folds = 2;
  options.seed = 1;
  CvFit fit;
  fit.fixed_mu = SimplexWeights::uniform(1);
  SolverConfig solver;
  CHECK(cv_score(spec, {kx}, side, options, fit, solver) == 0.0);
  // All-degenerate grid: the tie rule still resolves to the largest sigma.
  CHECK(cross_validate_sigma(spec, {kx}, side, {0.2, 0.8}, options, fit, solver) == 0.8);
}

TEST_CASE("cv_score is deterministic in the seed") {
  const ToyData toy = make_two_blobs(8, 6.0, 13);
  const KernelMatrix k = center_train(rbf_from_distance(pairwise_distances(toy.points)));
  InstanceSpec spec;
  spec.task = Task::kfda;
  spec.sigma = 0.5;
  SideInputs side;
  side.labels_x = make_label_vector(toy.labels);
  CvOptions options;
  options.folds = 2;
  options.seed = 11;
  CvFit fit;
  fit.fixed_mu = SimplexWeights::uniform(1);
  SolverConfig solver;
  const double a = cv_score(spec, {k}, side, options, fit, solver);
  const double b = cv_score(spec, {k}, side, options, fit, solver);
  CHECK(a == b);
  CHECK(a > 0.9);  // separable toy
}
