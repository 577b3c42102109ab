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

#include "mklrt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mklrt/errors.hpp"
#include "mklrt/kernel_ops.hpp"
#include "mklrt/log.hpp"
#include "mklrt/random.hpp"

namespace mklrt {

Metric metric_from_name(const std::string& name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "cosine") return Metric::cosine;
  throw validation_error("unknown metric '" + name + "' (expected euclidean or cosine)");
}

const char* metric_name(Metric m) {
  return m == Metric::euclidean ? "euclidean" : "cosine";
}

namespace {

// Cosine similarity with zero vectors pushed below the [-1, 1] range so
// they always rank last (and deterministically, via the index tie rule).
double cosine_sim(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return -2.0;
  return a.dot(b) / (na * nb);
}

}  // namespace

std::vector<int> nn_classify(const Matrix& train_latent,
                             const std::vector<int>& train_labels,
                             const Matrix& test_latent, Metric metric) {
  const Index n_train = train_latent.rows();
  if (n_train == 0) throw validation_error("empty training set");
  if (static_cast<Index>(train_labels.size()) != n_train) {
    throw validation_error("training labels and latents disagree on size");
  }
  if (test_latent.cols() != train_latent.cols()) {
    throw validation_error("train and test latent dimensions differ");
  }
  std::vector<int> predicted(static_cast<std::size_t>(test_latent.rows()));
  for (Index t = 0; t < test_latent.rows(); ++t) {
    double best = 0.0;
    Index best_j = -1;
    for (Index j = 0; j < n_train; ++j) {
      const double d =
          metric == Metric::euclidean
              ? (train_latent.row(j) - test_latent.row(t)).squaredNorm()
              : 1.0 - cosine_sim(train_latent.row(j).transpose(),
                                 test_latent.row(t).transpose());
      if (best_j < 0 || d < best) {  // strict <: ties keep the smallest index
        best = d;
        best_j = j;
      }
    }
    predicted[static_cast<std::size_t>(t)] =
        train_labels[static_cast<std::size_t>(best_j)];
  }
  return predicted;
}

EvalReport mean_per_class_accuracy(const std::vector<int>& truth,
                                   const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    throw validation_error("truth and prediction lengths differ");
  }
  if (truth.empty()) throw validation_error("nothing to score");
  std::map<int, std::pair<int, int>> per_class;  // class -> (correct, total)
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& [correct, total] = per_class[truth[i]];
    ++total;
    if (truth[i] == predicted[i]) ++correct;
  }
  EvalReport report;
  double sum = 0.0;
  for (const auto& [cls, counts] : per_class) {
    const double acc = static_cast<double>(counts.first) / counts.second;
    report.per_class_accuracy[cls] = acc;
    sum += acc;
  }
  report.mean_per_class = sum / static_cast<double>(per_class.size());
  return report;
}

std::vector<int> retrieve_cosine(const Vector& query, const Matrix& gallery) {
  std::vector<int> order(static_cast<std::size_t>(gallery.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> sim(order.size());
  for (std::size_t i = 0; i < sim.size(); ++i) {
    sim[i] = cosine_sim(gallery.row(static_cast<Index>(i)).transpose(), query);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = sim[static_cast<std::size_t>(a)];
    const double sb = sim[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return order;
}

double average_precision(const std::vector<int>& relevance) {
  int total_relevant = 0;
  for (int r : relevance) total_relevant += (r != 0);
  if (total_relevant == 0) {
    throw validation_error("average precision needs at least one relevant item");
  }
  double ap = 0.0;
  int seen_relevant = 0;
  for (std::size_t k = 0; k < relevance.size(); ++k) {
    if (relevance[k] != 0) {
      ++seen_relevant;
      ap += static_cast<double>(seen_relevant) / static_cast<double>(k + 1);
    }
  }
  return ap / total_relevant;
}

double mean_average_precision(const std::vector<double>& aps) {
  if (aps.empty()) throw validation_error("no queries to average");
  return std::accumulate(aps.begin(), aps.end(), 0.0) / static_cast<double>(aps.size());
}

EvalReport retrieval_map(const Matrix& query_latent, const std::vector<int>& query_labels,
                         const Matrix& gallery_latent,
                         const std::vector<int>& gallery_labels) {
  if (static_cast<Index>(query_labels.size()) != query_latent.rows() ||
      static_cast<Index>(gallery_labels.size()) != gallery_latent.rows()) {
    throw validation_error("labels and latents disagree on size");
  }
  EvalReport report;
  for (Index q = 0; q < query_latent.rows(); ++q) {
    const std::vector<int> order = retrieve_cosine(query_latent.row(q).transpose(),
                                                   gallery_latent);
    std::vector<int> relevance(order.size());
    int total_relevant = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      relevance[k] = gallery_labels[static_cast<std::size_t>(order[k])] ==
                     query_labels[static_cast<std::size_t>(q)];
      total_relevant += relevance[k];
    }
    if (total_relevant == 0) {
      ++report.skipped_queries;
      continue;
    }
    report.per_query_ap.push_back(average_precision(relevance));
  }
  if (report.skipped_queries > 0) {
    warn(std::to_string(report.skipped_queries) +
         " queries had no relevant gallery item and were excluded from MAP");
  }
  if (report.per_query_ap.empty()) {
    throw validation_error("every query lacked relevant gallery items");
  }
  report.map = mean_average_precision(report.per_query_ap);
  return report;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw validation_error("need at least 2 folds");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  std::vector<int> fold_of(labels.size(), -1);
  int offset = 0;  // rotates across classes so fold sizes stay balanced
  for (auto& [cls, idx] : by_class) {
    rng.shuffle(idx);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      fold_of[idx[j]] = static_cast<int>((j + static_cast<std::size_t>(offset)) %
                                         static_cast<std::size_t>(folds));
    }
    offset = (offset + static_cast<int>(idx.size())) % folds;
  }
  return fold_of;
}

namespace {

KernelMatrix subset_kernel(const KernelMatrix& k, const std::vector<Index>& idx) {
  Matrix values(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
  std::vector<std::string> ids;
  ids.reserve(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    ids.push_back(k.item_ids[static_cast<std::size_t>(idx[a])]);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      values(static_cast<Index>(a), static_cast<Index>(b)) = k.values(idx[a], idx[b]);
    }
  }
  return KernelMatrix{std::move(values), std::move(ids)};
}

CrossKernelMatrix cross_block(const KernelMatrix& k, const std::vector<Index>& rows,
                              const std::vector<Index>& cols) {
  Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  std::vector<std::string> row_ids, col_ids;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    row_ids.push_back(k.item_ids[static_cast<std::size_t>(rows[a])]);
    for (std::size_t b = 0; b < cols.size(); ++b) {
      values(static_cast<Index>(a), static_cast<Index>(b)) = k.values(rows[a], cols[b]);
    }
  }
  for (std::size_t b = 0; b < cols.size(); ++b) {
    col_ids.push_back(k.item_ids[static_cast<std::size_t>(cols[b])]);
  }
  return CrossKernelMatrix{std::move(values), std::move(row_ids), std::move(col_ids)};
}

std::vector<int> pick_labels(const std::vector<int>& labels, const std::vector<Index>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(labels[static_cast<std::size_t>(i)]);
  return out;
}

struct FoldSplit {
  std::vector<Index> train;
  std::vector<Index> test;
};

FoldSplit split_for_fold(const std::vector<int>& fold_of, int fold) {
  FoldSplit s;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    (fold_of[i] == fold ? s.test : s.train).push_back(static_cast<Index>(i));
  }
  return s;
}

EmbeddingModel fit_fold(const InstanceSpec& spec, const std::vector<KernelMatrix>& kernels,
                        const SideInputs& side, const CvFit& fit,
                        const SolverConfig& solver) {
  if (fit.fixed_mu) {
    const KernelMatrix combined =
        fit.rule == CombineRule::linear ? combine(*fit.fixed_mu, kernels)
                                        : combine_product(*fit.fixed_mu, kernels);
    return fit_with_combined(spec, combined, side, *fit.fixed_mu, fit.rule);
  }
  return mkl_rt_fit(spec, kernels, side, solver).model;
}

}  // namespace

double cv_score(const InstanceSpec& spec, const std::vector<KernelMatrix>& kernels,
                const SideInputs& side, const CvOptions& options, const CvFit& fit,
                const SolverConfig& solver) {
  if (kernels.empty()) throw validation_error("no kernels given");
  const Index n = kernels.front().size();
  if (options.folds < 2 || options.folds > n) {
    throw validation_error("fold count must lie in [2, N]");
  }
  if ((spec.task == Task::kcca || spec.task == Task::lkcca) && !side.kernel_z) {
    throw validation_error("this task needs a second-view kernel");
  }
  if (spec.task == Task::lkcca && !side.labels_z) {
    throw validation_error("lkcca needs second-view labels");
  }

  // Fold assignment per view. kcca folds the pair index; the labeled
  // tasks stratify by class.
  std::vector<int> folds_x;
  std::vector<int> folds_z;
  if (spec.task == Task::kfda || spec.task == Task::lkcca) {
    if (!side.labels_x) throw validation_error("labels required for this task");
    folds_x = stratified_folds(side.labels_x->labels, options.folds, options.seed);
  } else {
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(options.seed);
    rng.shuffle(order);
    folds_x.resize(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      folds_x[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(options.folds));
    }
  }
  if (spec.task == Task::lkcca) {
    folds_z = stratified_folds(side.labels_z->labels, options.folds, options.seed + 1);
  }

  double total = 0.0;
  for (int f = 0; f < options.folds; ++f) {
    const FoldSplit sx = split_for_fold(folds_x, f);
    if (sx.train.empty() || sx.test.empty()) {
      throw validation_error("fold " + std::to_string(f) + " is degenerate");
    }
    std::vector<KernelMatrix> train_kernels;
    train_kernels.reserve(kernels.size());
    for (const auto& k : kernels) train_kernels.push_back(subset_kernel(k, sx.train));

    SideInputs fold_side;
    FoldSplit sz;
    switch (spec.task) {
      case Task::kfda: {
        fold_side.labels_x = LabelVector{pick_labels(side.labels_x->labels, sx.train),
                                         side.labels_x->num_classes};
        break;
      }
      case Task::kcca: {
        sz = sx;  // paired views share the split
        fold_side.kernel_z = subset_kernel(*side.kernel_z, sz.train);
        break;
      }
      case Task::lkcca: {
        sz = split_for_fold(folds_z, f);
        fold_side.labels_x = LabelVector{pick_labels(side.labels_x->labels, sx.train),
                                         side.labels_x->num_classes};
        fold_side.labels_z = LabelVector{pick_labels(side.labels_z->labels, sz.train),
                                         side.labels_z->num_classes};
        fold_side.kernel_z = subset_kernel(*side.kernel_z, sz.train);
        break;
      }
    }

    const EmbeddingModel model = fit_fold(spec, train_kernels, fold_side, fit, solver);
    if (model.rank() == 0) continue;  // degenerate fold scores 0

    // Held-out latents through the same projection path production uses.
    std::vector<CrossKernelMatrix> cross_x;
    cross_x.reserve(kernels.size());
    for (const auto& k : kernels) cross_x.push_back(cross_block(k, sx.test, sx.train));
    const Matrix test_x = project(model, cross_x, View::first);

    if (spec.task == Task::kfda) {
      std::vector<CrossKernelMatrix> train_cross;
      for (const auto& k : train_kernels) {
        train_cross.push_back(CrossKernelMatrix{k.values, k.item_ids, k.item_ids});
      }
      const Matrix train_latent = project(model, train_cross, View::first);
      const std::vector<int> predicted =
          nn_classify(train_latent, fold_side.labels_x->labels, test_x, options.metric);
      total += mean_per_class_accuracy(pick_labels(side.labels_x->labels, sx.test),
                                       predicted)
                   .mean_per_class;
      continue;
    }

    const CrossKernelMatrix cross_z = cross_block(*side.kernel_z, sz.test, sz.train);
    const Matrix test_z = project(model, {cross_z}, View::second);

    std::vector<int> labels_x_test, labels_z_test;
    if (spec.task == Task::kcca) {
      // Pair-identity relevance: item i of one view retrieves item i of
      // the other.
      labels_x_test.resize(sx.test.size());
      std::iota(labels_x_test.begin(), labels_x_test.end(), 0);
      labels_z_test = labels_x_test;
    } else {
      labels_x_test = pick_labels(side.labels_x->labels, sx.test);
      labels_z_test = pick_labels(side.labels_z->labels, sz.test);
    }
    const double map_x = retrieval_map(test_x, labels_x_test, test_z, labels_z_test).map;
    const double map_z = retrieval_map(test_z, labels_z_test, test_x, labels_x_test).map;
    total += 0.5 * (map_x + map_z);
  }
  return total / options.folds;
}

double cross_validate_sigma(const InstanceSpec& spec,
                            const std::vector<KernelMatrix>& kernels,
                            const SideInputs& side, const std::vector<double>& sigma_grid,
                            const CvOptions& options, const CvFit& fit,
                            const SolverConfig& solver) {
  if (sigma_grid.empty()) throw validation_error("sigma grid is empty");
  std::vector<double> grid = sigma_grid;
  std::sort(grid.begin(), grid.end());
  double best_sigma = grid.front();
  double best_score = -1.0;
  for (double sigma : grid) {
    InstanceSpec s = spec;
    s.sigma = sigma;
    SolverConfig cfg = solver;
    cfg.sigma = sigma;
    const double score = cv_score(s, kernels, side, options, fit, cfg);
    if (score >= best_score) {  // ties go to the larger sigma
      best_score = score;
      best_sigma = sigma;
    }
  }
  return best_sigma;
}

}  // namespace mklrt
