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

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mklrt/baselines.hpp"
#include "mklrt/errors.hpp"
#include "mklrt/eval.hpp"
#include "mklrt/instances.hpp"
#include "mklrt/io.hpp"
#include "mklrt/kernel_ops.hpp"
#include "mklrt/log.hpp"
#include "mklrt/numtext.hpp"
#include "mklrt/oracle.hpp"
#include "mklrt/pipeline.hpp"
#include "mklrt/silp.hpp"

namespace {

using namespace mklrt;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitUnconverged = 3;

// Options shared by train, baseline and oracle.
struct FitOptions {
  std::string task = "kfda";
  std::vector<std::string> kernel_paths;
  std::string labels_path;
  std::string kernel_z_path;
  std::string labels_z_path;
  std::string input_type = "kernel";
  bool center = false;
  bool normalize = false;
  bool center_z = false;
  bool allow_indefinite = false;
  double sigma = 0.5;
  std::vector<double> sigma_grid;
  int folds = 5;
  std::optional<int> dims;
  double epsilon = 1e-4;
  int max_iters = 500;
  double threshold = 1e-3;
  std::string kfda_variant = "A";
  std::string metric = "euclidean";
  std::uint64_t seed = 0;
  std::string out_path;
  std::string trace_path;
};

void add_fit_options(CLI::App* cmd, FitOptions& o, bool needs_out) {
  cmd->add_option("--task", o.task, "Problem instance: kfda, kcca or lkcca")
      ->check(CLI::IsMember({"kfda", "kcca", "lkcca"}))
      ->required();
  cmd->add_option("--kernels", o.kernel_paths,
                  "First-view kernel (or distance) matrix files, comma separated")
      ->delimiter(',')
      ->required();
  cmd->add_option("--labels", o.labels_path, "Label CSV for the first view (kfda, lkcca)");
  cmd->add_option("--kernel-z", o.kernel_z_path, "Second-view kernel file (kcca, lkcca)");
  cmd->add_option("--labels-z", o.labels_z_path, "Label CSV for the second view (lkcca)");
  cmd->add_option("--input-type", o.input_type,
                  "Treat --kernels files as precomputed kernels or as distance "
                  "matrices to pass through exp(-d/eta)")
      ->check(CLI::IsMember({"kernel", "distance"}));
  cmd->add_flag("--center", o.center, "Center each first-view kernel in feature space");
  cmd->add_flag("--normalize", o.normalize, "Scale each first-view kernel to trace N");
  cmd->add_flag("--center-z", o.center_z, "Center the second-view kernel in feature space");
  cmd->add_flag("--allow-indefinite", o.allow_indefinite,
                "Accept kernels that fail the PSD check (logged)");
  cmd->add_option("--sigma", o.sigma, "Regularization in (0,1)");
  cmd->add_option("--sigma-grid", o.sigma_grid,
                  "Cross-validate sigma over this comma-separated grid")
      ->delimiter(',');
  cmd->add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
  cmd->add_option_function<int>(
         "--dims", [&o](const int& v) { o.dims = v; },
         "Embedding dimensions (default: P-1 for kfda/lkcca, full rank for kcca)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", o.epsilon, "SILP stopping gap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", o.max_iters, "SILP iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threshold", o.threshold, "Kernel selection threshold on mu");
  cmd->add_option("--kfda-variant", o.kfda_variant, "KFDA within-class side: A or B")
      ->check(CLI::IsMember({"A", "B"}));
  cmd->add_option("--metric", o.metric, "NN metric for classification CV")
      ->check(CLI::IsMember({"euclidean", "cosine"}));
  cmd->add_option("--seed", o.seed, "Seed for all randomness (fold shuffles)");
  auto* out = cmd->add_option("--out", o.out_path, "Output model file");
  if (needs_out) out->required();
  cmd->fallthrough(true);
}

Task parse_task(const FitOptions& o) { return task_from_name(o.task); }

InstanceSpec make_spec(const FitOptions& o) {
  InstanceSpec spec;
  spec.task = parse_task(o);
  spec.sigma = o.sigma;
  spec.dims = o.dims;
  spec.kfda_variant = o.kfda_variant == "A" ? KfdaVariant::a : KfdaVariant::b;
  return spec;
}

SolverConfig make_solver_config(const FitOptions& o) {
  SolverConfig cfg;
  cfg.sigma = o.sigma;
  cfg.epsilon = o.epsilon;
  cfg.max_iters = o.max_iters;
  cfg.selection_threshold = o.threshold;
  return cfg;
}

struct TrainInputs {
  std::vector<KernelMatrix> kernels;
  Preprocess pre;
  SideInputs side;
};

void check_psd_policy(const KernelMatrix& k, const std::string& path,
                      bool allow_indefinite) {
  double min_eig = 0.0;
  if (!is_psd(k, &min_eig)) {
    if (allow_indefinite) {
      warn("'" + path + "' is not PSD within tolerance (min eigenvalue " +
           format_double(min_eig) + "); continuing because --allow-indefinite is set");
    } else {
      throw validation_error("'" + path + "' is not PSD within tolerance (min eigenvalue " +
                             format_double(min_eig) +
                             "); pass --allow-indefinite to accept it");
    }
  }
}

TrainInputs load_train_inputs(const FitOptions& o) {
  TrainInputs in;
  std::vector<Matrix> raw;
  std::vector<std::vector<std::string>> ids;
  for (const auto& path : o.kernel_paths) {
    LoadedMatrix lm = read_matrix_file(path);
    if (lm.values.rows() != lm.values.cols()) {
      throw validation_error("'" + path + "' is not square");
    }
    raw.push_back(std::move(lm.values));
    ids.push_back(std::move(lm.row_ids));
  }
  PreprocessFlags flags;
  flags.from_distance = o.input_type == "distance";
  flags.center = o.center;
  flags.normalize = o.normalize;
  in.kernels = preprocess_train(raw, ids, flags, in.pre);
  for (std::size_t m = 0; m < in.kernels.size(); ++m) {
    check_psd_policy(in.kernels[m], o.kernel_paths[m], o.allow_indefinite);
  }

  const Task task = parse_task(o);
  if (task == Task::kfda || task == Task::lkcca) {
    if (o.labels_path.empty()) {
      throw validation_error("--labels is required for task " + o.task);
    }
    in.side.labels_x =
        align_labels(read_label_file(o.labels_path), in.kernels.front().item_ids);
    if (in.side.labels_x->size() != in.kernels.front().size()) {
      throw validation_error("label count does not match kernel size");
    }
  }
  if (task == Task::kcca || task == Task::lkcca) {
    if (o.kernel_z_path.empty()) {
      throw validation_error("--kernel-z is required for task " + o.task);
    }
    LoadedMatrix lm = read_matrix_file(o.kernel_z_path);
    KernelMatrix kz = make_kernel(std::move(lm.values), std::move(lm.row_ids));
    check_psd_policy(kz, o.kernel_z_path, o.allow_indefinite);
    in.side.kernel_z = preprocess_train_z(std::move(kz), o.center_z, in.pre);
  }
  if (task == Task::lkcca) {
    if (o.labels_z_path.empty()) {
      throw validation_error("--labels-z is required for task lkcca");
    }
    in.side.labels_z =
        align_labels(read_label_file(o.labels_z_path), in.side.kernel_z->item_ids);
    if (in.side.labels_z->size() != in.side.kernel_z->size()) {
      throw validation_error("second-view label count does not match kernel size");
    }
  }
  return in;
}

std::map<std::string, std::string> config_echo(const FitOptions& o, double sigma_used) {
  std::map<std::string, std::string> echo;
  echo["task"] = o.task;
  echo["sigma"] = format_double(sigma_used);
  echo["epsilon"] = format_double(o.epsilon);
  echo["max_iters"] = std::to_string(o.max_iters);
  echo["threshold"] = format_double(o.threshold);
  echo["kfda_variant"] = o.kfda_variant;
  echo["metric"] = o.metric;
  echo["seed"] = std::to_string(o.seed);
  echo["input_type"] = o.input_type;
  echo["center"] = o.center ? "true" : "false";
  echo["center_z"] = o.center_z ? "true" : "false";
  echo["normalize"] = o.normalize ? "true" : "false";
  echo["folds"] = std::to_string(o.folds);
  for (std::size_t m = 0; m < o.kernel_paths.size(); ++m) {
    echo["kernel_" + std::to_string(m)] = o.kernel_paths[m];
  }
  if (!o.kernel_z_path.empty()) echo["kernel_z"] = o.kernel_z_path;
  return echo;
}

double choose_sigma(const FitOptions& o, const TrainInputs& in, const CvFit& fit) {
  if (o.sigma_grid.empty()) return o.sigma;
  InstanceSpec spec = make_spec(o);
  CvOptions options;
  options.folds = o.folds;
  options.seed = o.seed;
  options.metric = metric_from_name(o.metric);
  const double best = cross_validate_sigma(spec, in.kernels, in.side, o.sigma_grid,
                                           options, fit, make_solver_config(o));
  std::cout << "cross-validated sigma: " << format_double(best) << "\n";
  return best;
}

void print_model_summary(const EmbeddingModel& m, double threshold) {
  std::cout << "task: " << task_name(m.task) << "\n";
  std::cout << "sigma: " << format_double(m.sigma) << "\n";
  std::cout << "dims: " << m.rank() << "\n";
  std::cout << "mu:";
  for (Index i = 0; i < m.mu.size(); ++i) std::cout << ' ' << format_double(m.mu.mu[i]);
  std::cout << "\nselected kernels (mu > " << format_double(threshold) << "):";
  for (int idx : m.selected) std::cout << ' ' << idx;
  std::cout << "\neigenvalues:";
  for (Index i = 0; i < m.lambda.size(); ++i) {
    std::cout << ' ' << format_double(m.lambda[i]);
  }
  std::cout << "\nconverged: " << (m.converged ? "yes" : "no") << "\n";
}

// --- train -------------------------------------------------------------------

int cmd_train(const FitOptions& o) {
  TrainInputs in = load_train_inputs(o);
  FitOptions local = o;
  local.sigma = choose_sigma(o, in, CvFit{});  // CV with the full MKL fit
  const InstanceSpec spec = make_spec(local);
  const SolverConfig cfg = make_solver_config(local);

  const MklFitResult fit = mkl_rt_fit(spec, in.kernels, in.side, cfg);

  ModelFile mf;
  mf.model = fit.model;
  mf.preprocess = in.pre;
  mf.config_echo = config_echo(local, local.sigma);
  save_model(local.out_path, mf);

  print_model_summary(fit.model, cfg.selection_threshold);
  std::cout << "objective: " << format_double(fit.objective) << "\n";
  std::cout << "silp iterations: " << fit.silp.iterations << "\n";
  std::cout << "model written to " << local.out_path << "\n";
  if (!local.trace_path.empty()) {
    write_trace_csv(local.trace_path, fit.silp,
                    {{"seed", std::to_string(local.seed)},
                     {"sigma", format_double(local.sigma)}});
    std::cout << "trace written to " << local.trace_path << "\n";
  }
  if (!fit.model.converged) {
    warn("SILP did not reach the stopping gap within --max-iters");
    return kExitUnconverged;
  }
  return kExitOk;
}

// --- baseline ----------------------------------------------------------------

int cmd_baseline(const FitOptions& o, const std::string& method) {
  TrainInputs in = load_train_inputs(o);
  const Index m = static_cast<Index>(in.kernels.size());

  SimplexWeights mu = SimplexWeights::uniform(m);
  CombineRule rule = CombineRule::linear;
  double sigma_used = o.sigma;

  if (method == "ak" || method == "pk") {
    rule = method == "pk" ? CombineRule::product : CombineRule::linear;
    CvFit fit;
    fit.fixed_mu = mu;
    fit.rule = rule;
    sigma_used = choose_sigma(o, in, fit);
  } else {  // bik: joint argmax over (kernel, sigma) by CV score
    const std::vector<double> grid =
        o.sigma_grid.empty() ? std::vector<double>{o.sigma} : o.sigma_grid;
    CvOptions options;
    options.folds = o.folds;
    options.seed = o.seed;
    options.metric = metric_from_name(o.metric);
    int best_kernel = -1;
    double best_sigma = grid.front();
    double best_score = 0.0;
    for (double sigma : grid) {
      InstanceSpec spec = make_spec(o);
      spec.sigma = sigma;
      SolverConfig cfg = make_solver_config(o);
      cfg.sigma = sigma;
      CvFit fit;
      fit.fixed_mu = SimplexWeights::uniform(1);
      const int pick = best_individual_kernel(
          in.kernels, [&](int, const KernelMatrix& k) {
            return cv_score(spec, {k}, in.side, options, fit, cfg);
          });
      CvFit refit;
      refit.fixed_mu = SimplexWeights::uniform(1);
      const double score =
          cv_score(spec, {in.kernels[static_cast<std::size_t>(pick)]}, in.side,
                   options, refit, cfg);
      if (best_kernel < 0 || score >= best_score) {
        best_score = score;
        best_kernel = pick;
        best_sigma = sigma;
      }
    }
    std::cout << "best individual kernel: " << best_kernel
              << " (cv score " << format_double(best_score) << ")\n";
    mu = SimplexWeights::unit(m, best_kernel);
    sigma_used = best_sigma;
  }

  InstanceSpec spec = make_spec(o);
  spec.sigma = sigma_used;
  const KernelMatrix combined =
      rule == CombineRule::linear ? combine(mu, in.kernels)
                                  : combine_product(mu, in.kernels);
  EmbeddingModel model = fit_with_combined(spec, combined, in.side, mu, rule);
  // Selection bookkeeping mirrors the trained models.
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu.mu[i] > o.threshold) model.selected.push_back(static_cast<int>(i));
  }

  ModelFile mf;
  mf.model = model;
  mf.preprocess = in.pre;
  mf.config_echo = config_echo(o, sigma_used);
  mf.config_echo["baseline"] = method;
  save_model(o.out_path, mf);
  print_model_summary(model, o.threshold);
  std::cout << "model written to " << o.out_path << "\n";
  return kExitOk;
}

// --- project -------------------------------------------------------------------

struct ProjectOptions {
  std::string model_path;
  std::vector<std::string> kernel_paths;
  std::string view = "first";
  std::string out_path;
};

int cmd_project(const ProjectOptions& o) {
  const ModelFile mf = load_model(o.model_path);
  std::vector<Matrix> raw;
  std::vector<std::vector<std::string>> test_ids;
  for (const auto& path : o.kernel_paths) {
    LoadedMatrix lm = read_matrix_file(path);
    raw.push_back(std::move(lm.values));
    test_ids.push_back(std::move(lm.row_ids));
  }

  Matrix latents;
  std::vector<std::string> ids;
  if (o.view == "first") {
    const auto cross =
        preprocess_test(raw, test_ids, mf.model.train_ids_x, mf.preprocess);
    latents = project(mf.model, cross, View::first);
    ids = cross.front().test_ids;
  } else {
    if (raw.size() != 1) {
      throw validation_error("the second view takes exactly one kernel file");
    }
    const auto ck = preprocess_test_z(std::move(raw[0]), std::move(test_ids[0]),
                                      mf.model.train_ids_z, mf.preprocess);
    latents = project(mf.model, {ck}, View::second);
    ids = ck.test_ids;
  }

  std::map<std::string, std::string> meta;
  meta["seed"] = mf.config_echo.count("seed") ? mf.config_echo.at("seed") : "0";
  meta["task"] = task_name(mf.model.task);
  meta["view"] = o.view;
  write_latents_csv(o.out_path, latents, ids, meta);
  std::cout << "latents (" << latents.rows() << " x " << latents.cols()
            << ") written to " << o.out_path << "\n";
  return kExitOk;
}

// --- evaluate ------------------------------------------------------------------

struct EvaluateOptions {
  std::string mode = "classify";
  std::string model_path;
  std::vector<std::string> train_kernel_paths;
  std::vector<std::string> test_kernel_paths;
  std::string train_latents_path, test_latents_path;
  std::string train_labels_path, test_labels_path;
  std::string query_latents_path, gallery_latents_path;
  std::string query_labels_path, gallery_labels_path;
  std::string metric = "euclidean";
  std::string out_path;
};

std::vector<int> labels_for(const std::string& path, const std::vector<std::string>& ids) {
  return align_labels(read_label_file(path), ids).labels;
}

int cmd_evaluate(const EvaluateOptions& o) {
  if (o.mode == "classify") {
    const bool latents_given =
        !o.train_latents_path.empty() && !o.test_latents_path.empty();
    const bool model_given = !o.model_path.empty() &&
                             !o.train_kernel_paths.empty() &&
                             !o.test_kernel_paths.empty();
    if (!latents_given && !model_given) {
      throw validation_error(
          "classify needs either --train-latents/--test-latents or "
          "--model with --train-kernels/--test-kernels");
    }
  } else if (o.query_latents_path.empty() || o.gallery_latents_path.empty()) {
    throw validation_error("retrieve needs --query-latents and --gallery-latents");
  }
  EvalReport report;
  if (o.mode == "classify") {
    Matrix train_lat, test_lat;
    std::vector<std::string> train_ids, test_ids;
    std::map<std::string, std::string> meta;
    if (!o.model_path.empty()) {
      // Project internally from the model plus kernel files.
      const ModelFile mf = load_model(o.model_path);
      std::vector<Matrix> raw_train, raw_test;
      std::vector<std::vector<std::string>> ids_train, ids_test;
      for (const auto& p : o.train_kernel_paths) {
        LoadedMatrix lm = read_matrix_file(p);
        raw_train.push_back(std::move(lm.values));
        ids_train.push_back(std::move(lm.row_ids));
      }
      for (const auto& p : o.test_kernel_paths) {
        LoadedMatrix lm = read_matrix_file(p);
        raw_test.push_back(std::move(lm.values));
        ids_test.push_back(std::move(lm.row_ids));
      }
      const auto cross_train =
          preprocess_test(raw_train, ids_train, mf.model.train_ids_x, mf.preprocess);
      const auto cross_test =
          preprocess_test(raw_test, ids_test, mf.model.train_ids_x, mf.preprocess);
      train_lat = project(mf.model, cross_train, View::first);
      test_lat = project(mf.model, cross_test, View::first);
      train_ids = cross_train.front().test_ids;
      test_ids = cross_test.front().test_ids;
      meta["task"] = task_name(mf.model.task);
      meta["sigma"] = format_double(mf.model.sigma);
      meta["dims"] = std::to_string(mf.model.rank());
      std::string mu_text;
      for (Index i = 0; i < mf.model.mu.size(); ++i) {
        if (i) mu_text += ' ';
        mu_text += format_double(mf.model.mu.mu[i]);
      }
      meta["mu"] = mu_text;
      if (mf.config_echo.count("seed")) meta["seed"] = mf.config_echo.at("seed");
    } else {
      const LatentsFile train = read_latents_csv(o.train_latents_path);
      const LatentsFile test = read_latents_csv(o.test_latents_path);
      train_lat = train.values;
      test_lat = test.values;
      train_ids = train.ids;
      test_ids = test.ids;
    }
    const std::vector<int> train_labels = labels_for(o.train_labels_path, train_ids);
    const std::vector<int> test_labels = labels_for(o.test_labels_path, test_ids);
    const auto predicted =
        nn_classify(train_lat, train_labels, test_lat, metric_from_name(o.metric));
    report = mean_per_class_accuracy(test_labels, predicted);
    report.metadata = std::move(meta);
    report.metadata["mode"] = "classify";
    report.metadata["metric"] = o.metric;
    write_classification_report(o.out_path, report);
    std::cout << "mean per-class accuracy: " << format_double(report.mean_per_class)
              << "\n";
  } else {  // retrieve
    const LatentsFile queries = read_latents_csv(o.query_latents_path);
    const LatentsFile gallery = read_latents_csv(o.gallery_latents_path);
    const std::vector<int> qlabels = labels_for(o.query_labels_path, queries.ids);
    const std::vector<int> glabels = labels_for(o.gallery_labels_path, gallery.ids);
    report = retrieval_map(queries.values, qlabels, gallery.values, glabels);
    report.metadata["mode"] = "retrieve";
    write_retrieval_report(o.out_path, report);
    std::cout << "MAP: " << format_double(report.map) << " over "
              << report.per_query_ap.size() << " queries";
    if (report.skipped_queries > 0) {
      std::cout << " (" << report.skipped_queries << " skipped)";
    }
    std::cout << "\n";
  }
  std::cout << "report written to " << o.out_path << "\n";
  return kExitOk;
}

// --- oracle --------------------------------------------------------------------

int cmd_oracle(const FitOptions& o, double step, double tolerance,
               const std::string& table_path) {
  TrainInputs in = load_train_inputs(o);
  const InstanceSpec spec = make_spec(o);

  Matrix l, lp;
  switch (spec.task) {
    case Task::kfda: {
      const PencilSides sides = build_kfda(*in.side.labels_x, spec.kfda_variant);
      l = sides.L;
      lp = sides.Lp;
      break;
    }
    case Task::kcca: {
      const PencilSides sides = build_kcca(*in.side.kernel_z, spec.sigma);
      l = sides.L;
      lp = sides.Lp;
      break;
    }
    case Task::lkcca: {
      const LkccaSides sides =
          build_lkcca(*in.side.labels_x, *in.side.labels_z, *in.side.kernel_z, spec.sigma);
      l = sides.L;
      lp = sides.Lp;
      break;
    }
  }

  const BruteForceResult grid = brute_force_mkl(in.kernels, l, lp, spec.sigma, step);
  const MklSolution sol = mkl_rt_fit_pencil(in.kernels, l, lp, make_solver_config(o));

  if (!table_path.empty()) {
    std::map<std::string, std::string> meta = config_echo(o, spec.sigma);
    meta["step"] = format_double(step);
    write_oracle_table_csv(table_path, grid, meta);
    std::cout << "table written to " << table_path << "\n";
  }

  const bool pass =
      grid.best_objective <= sol.objective + tolerance * std::abs(grid.best_objective);
  std::cout << "silp objective: " << format_double(sol.objective) << "\n";
  std::cout << "grid maximum:   " << format_double(grid.best_objective) << " at mu =";
  for (Index i = 0; i < grid.best_mu.size(); ++i) {
    std::cout << ' ' << format_double(grid.best_mu.mu[i]);
  }
  std::cout << "\nsilp mu:        ";
  for (Index i = 0; i < sol.mu_star.size(); ++i) {
    std::cout << ' ' << format_double(sol.mu_star.mu[i]);
  }
  std::cout << "\nverdict: " << (pass ? "PASS" : "FAIL") << "\n";
  if (!sol.silp.converged) {
    warn("SILP did not converge within --max-iters; verdict may be pessimistic");
  }
  return pass ? kExitOk : kExitNumerical;
}

// --- inspect -------------------------------------------------------------------

int cmd_inspect(const std::string& model_path) {
  const ModelFile mf = load_model(model_path);
  double threshold = 1e-3;
  if (mf.config_echo.count("threshold")) {
    threshold = parse_double(mf.config_echo.at("threshold"));
  }
  print_model_summary(mf.model, threshold);
  std::cout << "training items: " << mf.model.train_ids_x.size() << "\n";
  if (mf.model.xi) {
    std::cout << "second view: " << mf.model.train_ids_z.size() << " items, map "
              << mf.model.xi->rows() << " x " << mf.model.xi->cols() << "\n";
  }
  std::cout << "preprocess: input_type="
            << (mf.preprocess.from_distance ? "distance" : "kernel")
            << " center=" << (mf.preprocess.centered ? "true" : "false")
            << " normalize=" << (mf.preprocess.normalized ? "true" : "false")
            << " center_z=" << (mf.preprocess.centered_z ? "true" : "false") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mklrt: multiple kernel learning for ratio-trace problems\n"
               "Learns convex kernel combinations for KFDA / KCCA / LKCCA by\n"
               "column generation, solves the pencil by GEVD, and evaluates the\n"
               "embeddings (NN classification, cross-modal retrieval)."};
  app.set_config("--config", "",
                 "INI config file; keys live in a section per subcommand, e.g. [train]");
  app.require_subcommand(1);

  FitOptions train_opts;
  auto* train = app.add_subcommand("train", "Learn kernel weights and the embedding");
  add_fit_options(train, train_opts, /*needs_out=*/true);
  train->add_option("--trace", train_opts.trace_path, "Write the convergence trace CSV");

  FitOptions base_opts;
  std::string base_method = "ak";
  auto* baseline = app.add_subcommand("baseline", "Non-learned kernel combinations");
  add_fit_options(baseline, base_opts, /*needs_out=*/true);
  baseline->add_option("--method", base_method, "ak (average), pk (product), bik (best single)")
      ->check(CLI::IsMember({"ak", "pk", "bik"}))
      ->required();

  ProjectOptions project_opts;
  auto* project_cmd = app.add_subcommand("project", "Embed out-of-sample items");
  project_cmd->add_option("--model", project_opts.model_path, "Model file")->required();
  project_cmd
      ->add_option("--kernels", project_opts.kernel_paths,
                   "Test-vs-train kernel (or distance) files, comma separated")
      ->delimiter(',')
      ->required();
  project_cmd->add_option("--view", project_opts.view, "first or second")
      ->check(CLI::IsMember({"first", "second"}));
  project_cmd->add_option("--out", project_opts.out_path, "Output latent CSV")->required();

  EvaluateOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Score latents");
  evaluate->add_option("--mode", eval_opts.mode, "classify or retrieve")
      ->check(CLI::IsMember({"classify", "retrieve"}))
      ->required();
  evaluate->add_option("--model", eval_opts.model_path,
                       "Model file (classify: project kernels internally)");
  evaluate->add_option("--train-kernels", eval_opts.train_kernel_paths, "")
      ->delimiter(',');
  evaluate->add_option("--test-kernels", eval_opts.test_kernel_paths, "")->delimiter(',');
  evaluate->add_option("--train-latents", eval_opts.train_latents_path, "");
  evaluate->add_option("--test-latents", eval_opts.test_latents_path, "");
  evaluate->add_option("--train-labels", eval_opts.train_labels_path, "");
  evaluate->add_option("--test-labels", eval_opts.test_labels_path, "");
  evaluate->add_option("--query-latents", eval_opts.query_latents_path, "");
  evaluate->add_option("--gallery-latents", eval_opts.gallery_latents_path, "");
  evaluate->add_option("--query-labels", eval_opts.query_labels_path, "");
  evaluate->add_option("--gallery-labels", eval_opts.gallery_labels_path, "");
  evaluate->add_option("--metric", eval_opts.metric, "euclidean or cosine")
      ->check(CLI::IsMember({"euclidean", "cosine"}));
  evaluate->add_option("--out", eval_opts.out_path, "Report CSV")->required();

  FitOptions oracle_opts;
  double oracle_step = 0.1;
  double oracle_tolerance = 1e-3;
  std::string oracle_table;
  auto* oracle = app.add_subcommand(
      "oracle", "Brute-force simplex grid check of the learned weights");
  add_fit_options(oracle, oracle_opts, /*needs_out=*/false);
  oracle->add_option("--step", oracle_step, "Grid step (must divide 1)")->required();
  oracle->add_option("--tolerance", oracle_tolerance, "Relative one-sided tolerance");
  oracle->add_option("--table", oracle_table, "Write the full grid table CSV");

  project_cmd->fallthrough(true);
  evaluate->fallthrough(true);

  std::string inspect_model;
  auto* inspect = app.add_subcommand("inspect", "Print a model summary");
  inspect->add_option("--model", inspect_model, "Model file")->required();
  inspect->fallthrough(true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "mklrt: error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*train) return cmd_train(train_opts);
    if (*baseline) return cmd_baseline(base_opts, base_method);
    if (*project_cmd) return cmd_project(project_opts);
    if (*evaluate) return cmd_evaluate(eval_opts);
    if (*oracle) return cmd_oracle(oracle_opts, oracle_step, oracle_tolerance, oracle_table);
    if (*inspect) return cmd_inspect(inspect_model);
  } catch (const validation_error& e) {
    std::cerr << "mklrt: error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const numerical_error& e) {
    std::cerr << "mklrt: numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "mklrt: error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
