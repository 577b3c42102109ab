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

#ifndef MKLRT_EVAL_HPP
#define MKLRT_EVAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mklrt/instances.hpp"
#include "mklrt/silp.hpp"
#include "mklrt/types.hpp"

namespace mklrt {

enum class Metric { euclidean, cosine };

Metric metric_from_name(const std::string& name);
const char* metric_name(Metric m);

/// 1-nearest-neighbor labels for the test rows; exact distance ties go
/// to the smallest training index.
std::vector<int> nn_classify(const Matrix& train_latent,
                             const std::vector<int>& train_labels,
                             const Matrix& test_latent, Metric metric);

/// Classification or retrieval scores plus run metadata. Exactly one of
/// the two score blocks is populated.
struct EvalReport {
  std::map<int, double> per_class_accuracy;
  double mean_per_class = 0.0;
  std::vector<double> per_query_ap;
  double map = 0.0;
  int skipped_queries = 0;  // queries with no relevant gallery item
  std::map<std::string, std::string> metadata;
};

EvalReport mean_per_class_accuracy(const std::vector<int>& truth,
                                   const std::vector<int>& predicted);

/// Gallery indices sorted by descending cosine similarity to the query;
/// similarity ties and zero vectors resolve by ascending index, with
/// zero vectors after everything else.
std::vector<int> retrieve_cosine(const Vector& query, const Matrix& gallery);

/// AP = (1/R) sum over relevant ranks k of precision@k, for a ranked
/// 0/1 relevance list. Throws when nothing is relevant.
double average_precision(const std::vector<int>& relevance);

double mean_average_precision(const std::vector<double>& aps);

/// Cosine retrieval of every query against the gallery with same-label
/// relevance; queries without any relevant gallery item are skipped with
/// a warning and counted in the report.
EvalReport retrieval_map(const Matrix& query_latent, const std::vector<int>& query_labels,
                         const Matrix& gallery_latent,
                         const std::vector<int>& gallery_labels);

/// How the per-fold model is produced during cross-validation: the full
/// MKL fit, or a fixed-weight fit (baselines).
struct CvFit {
  std::optional<SimplexWeights> fixed_mu;  // empty: run the SILP
  CombineRule rule = CombineRule::linear;
};

struct CvOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  Metric metric = Metric::euclidean;  // classification tasks
};

/// Mean metric over stratified folds at one sigma: mean per-class
/// accuracy for kfda, cross-modal MAP (both directions averaged) for
/// kcca/lkcca. Degenerate folds (rank-0 embeddings) score 0.
double cv_score(const InstanceSpec& spec, const std::vector<KernelMatrix>& kernels,
                const SideInputs& side, const CvOptions& options, const CvFit& fit,
                const SolverConfig& solver);

/// Best sigma on the grid by cv_score; exact ties go to the larger
/// sigma.
double cross_validate_sigma(const InstanceSpec& spec,
                            const std::vector<KernelMatrix>& kernels,
                            const SideInputs& side, const std::vector<double>& sigma_grid,
                            const CvOptions& options, const CvFit& fit,
                            const SolverConfig& solver);

/// Stratified fold assignment: fold id per item, classes spread evenly,
/// order shuffled by the seed.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds,
                                  std::uint64_t seed);

}  // namespace mklrt

#endif  // MKLRT_EVAL_HPP
