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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mklrt/errors.hpp"
#include "mklrt/io.hpp"
#include "mklrt/silp.hpp"
#include "testutil.hpp"

using namespace mklrt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("mklrt_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("binary matrix round trip is bit exact, with and without ids") {
  TempDir tmp;
  Rng rng(701);
  Matrix m(3, 3);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) m(i, j) = rng.gaussian();
  }
  m(0, 1) = 0.1;  // not exactly representable; bit exactness matters

  SUBCASE("no ids") {
    write_matrix_binary(tmp.path("k.mklk"), m);
    const LoadedMatrix r = read_matrix_file(tmp.path("k.mklk"));
    CHECK(r.values == m);
    CHECK(r.row_ids.empty());
  }
  SUBCASE("square with row ids") {
    write_matrix_binary(tmp.path("k.mklk"), m, {"a", "b", "c"});
    const LoadedMatrix r = read_matrix_file(tmp.path("k.mklk"));
    CHECK(r.values == m);
    CHECK(r.row_ids == std::vector<std::string>{"a", "b", "c"});
    CHECK(r.col_ids == r.row_ids);
  }
  SUBCASE("cross with both id lists") {
    Matrix c(2, 3);
    c << 1, 2, 3, 4, 5, 0.3;
    write_matrix_binary(tmp.path("c.mklk"), c, {"t0", "t1"}, {"a", "b", "c"});
    const LoadedMatrix r = read_matrix_file(tmp.path("c.mklk"));
    CHECK(r.values == c);
    CHECK(r.row_ids == std::vector<std::string>{"t0", "t1"});
    CHECK(r.col_ids == std::vector<std::string>{"a", "b", "c"});
  }
}

TEST_CASE("csv matrix round trip preserves doubles exactly") {
  TempDir tmp;
  Matrix m(2, 2);
  m << 0.1, -1.0 / 3.0, 1e-300, 12345.6789;
  write_matrix_csv(tmp.path("k.csv"), m);
  const LoadedMatrix r = read_matrix_file(tmp.path("k.csv"));
  CHECK(r.values == m);
  CHECK(r.row_ids.empty());
}

TEST_CASE("malformed matrix files are rejected") {
  TempDir tmp;
  {
    std::ofstream os(tmp.path("bad.mklk"), std::ios::binary);
    os << "MKLK";  // truncated header
  }
  CHECK_THROWS_AS(read_matrix_file(tmp.path("bad.mklk")), validation_error);
  {
    std::ofstream os(tmp.path("ragged.csv"));
    os << "1,2\n3\n";
  }
  CHECK_THROWS_AS(read_matrix_file(tmp.path("ragged.csv")), validation_error);
  CHECK_THROWS_AS(read_matrix_file(tmp.path("missing.csv")), validation_error);
}

TEST_CASE("label file round trip and alignment") {
  TempDir tmp;
  LabelFile lf;
  lf.item_ids = {"x", "y", "z"};
  lf.class_ids = {7, 3, 7};
  write_label_file(tmp.path("labels.csv"), lf);
  const LabelFile r = read_label_file(tmp.path("labels.csv"));
  CHECK(r.item_ids == lf.item_ids);
  CHECK(r.class_ids == lf.class_ids);

  // Alignment by id reorders to kernel order and remaps to 1..P.
  const LabelVector y = align_labels(r, {"z", "x", "y"});
  CHECK(y.labels == std::vector<int>{2, 2, 1});

  // Falls back to file order when ids do not match.
  const LabelVector by_order = align_labels(r, {"0", "1", "2"});
  CHECK(by_order.labels == std::vector<int>{2, 1, 2});

  CHECK_THROWS_AS(align_labels(r, {"0", "1"}), validation_error);
}

TEST_CASE("latents csv round trip") {
  TempDir tmp;
  Matrix lat(2, 3);
  lat << 0.1, 0.2, -0.3, 1e-7, 2.0 / 3.0, 0;
  write_latents_csv(tmp.path("lat.csv"), lat, {"a", "b"}, {{"seed", "42"}});
  const LatentsFile r = read_latents_csv(tmp.path("lat.csv"));
  CHECK(r.values == lat);
  CHECK(r.ids == std::vector<std::string>{"a", "b"});
  CHECK(slurp(tmp.path("lat.csv")).find("# seed=42") != std::string::npos);
}

TEST_CASE("model save/load/save is byte identical") {
  TempDir tmp;
  Rng rng(709);
  ModelFile mf;
  mf.model.task = Task::kcca;
  mf.model.sigma = 0.3;
  Vector mu(2);
  mu << 1.0 / 3.0, 2.0 / 3.0;
  mf.model.mu = SimplexWeights{mu};
  mf.model.combine_rule = CombineRule::linear;
  mf.model.gamma = Matrix(3, 2);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 2; ++j) mf.model.gamma(i, j) = rng.gaussian();
  }
  mf.model.lambda = Vector(2);
  mf.model.lambda << 0.7, 0.1;
  mf.model.xi = Matrix(3, 2);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 2; ++j) (*mf.model.xi)(i, j) = rng.gaussian();
  }
  mf.model.train_ids_x = {"a", "b", "c"};
  mf.model.train_ids_z = {"p", "q", "r"};
  mf.model.selected = {0, 1};
  mf.preprocess.centered = true;
  mf.preprocess.col_means = {Vector::Constant(3, 0.25), Vector::Constant(3, 1.0 / 7.0)};
  mf.config_echo = {{"seed", "42"}, {"epsilon", "0.0001"}};

  save_model(tmp.path("m.json"), mf);
  const ModelFile loaded = load_model(tmp.path("m.json"));
  CHECK(loaded.model.gamma == mf.model.gamma);
  CHECK(*loaded.model.xi == *mf.model.xi);
  CHECK(loaded.model.mu.mu == mf.model.mu.mu);
  CHECK(loaded.model.lambda == mf.model.lambda);
  CHECK(loaded.preprocess.col_means[1] == mf.preprocess.col_means[1]);
  CHECK(loaded.config_echo.at("seed") == "42");

  save_model(tmp.path("m2.json"), loaded);
  CHECK(slurp(tmp.path("m.json")) == slurp(tmp.path("m2.json")));
}

TEST_CASE("trace and oracle table writers emit plot-ready csv") {
  TempDir tmp;
  SilpState state;
  Vector mu(2);
  mu << 0.5, 0.5;
  state.mu = SimplexWeights{mu};
  state.history.push_back(
      {1, std::numeric_limits<double>::infinity(), 3.0, 1.0, mu});
  state.history.push_back({2, 3.5, 3.4999, 0.0001, mu});
  write_trace_csv(tmp.path("trace.csv"), state);
  const std::string trace = slurp(tmp.path("trace.csv"));
  CHECK(trace.find("iteration,zeta,gap,mu0,mu1") != std::string::npos);
  CHECK(trace.find("1,inf,1") != std::string::npos);

  BruteForceResult r;
  r.table.push_back({mu, 1.25});
  r.best_mu = SimplexWeights{mu};
  r.best_objective = 1.25;
  write_oracle_table_csv(tmp.path("table.csv"), r, {{"step", "0.5"}});
  const std::string table = slurp(tmp.path("table.csv"));
  CHECK(table.find("mu0,mu1,objective") != std::string::npos);
  CHECK(table.find("0.5,0.5,1.25") != std::string::npos);
}
