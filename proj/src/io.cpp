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

#include "mklrt/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "mklrt/errors.hpp"
#include "mklrt/log.hpp"
#include "mklrt/numtext.hpp"

namespace mklrt {

namespace {

using json = nlohmann::ordered_json;

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  b[0] = static_cast<char>(v & 0xff);
  b[1] = static_cast<char>((v >> 8) & 0xff);
  b[2] = static_cast<char>((v >> 16) & 0xff);
  b[3] = static_cast<char>((v >> 24) & 0xff);
  os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw validation_error("unexpected end of binary matrix file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(b, 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw validation_error("unexpected end of binary matrix file");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream os(path, mode);
  if (!os) throw validation_error("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = {}) {
  std::ifstream is(path, mode);
  if (!is) throw validation_error("cannot open '" + path + "' for reading");
  return is;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // Trim whitespace and a trailing CR.
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? std::string()
                         : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& x : arr) v[i++] = x.get<double>();
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, Index expect_cols = -1) {
  const Index r = static_cast<Index>(rows.size());
  Index c = expect_cols;
  if (r > 0) c = static_cast<Index>(rows.front().size());
  if (c < 0) c = 0;
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != c) {
      throw validation_error("ragged matrix in model file");
    }
    Index j = 0;
    for (const auto& x : row) m(i, j++) = x.get<double>();
    ++i;
  }
  return m;
}

}  // namespace

void write_matrix_binary(const std::string& path, const Matrix& values,
                         const std::vector<std::string>& row_ids,
                         const std::vector<std::string>& col_ids) {
  if (!row_ids.empty() && static_cast<Index>(row_ids.size()) != values.rows()) {
    throw validation_error("row id count does not match the matrix");
  }
  if (!col_ids.empty() && static_cast<Index>(col_ids.size()) != values.cols()) {
    throw validation_error("column id count does not match the matrix");
  }
  if (row_ids.empty() && !col_ids.empty()) {
    throw validation_error("column ids require row ids");
  }
  auto os = open_out(path, std::ios::binary);
  os.write(kKernelMagic, 4);
  put_u32(os, kKernelFormatVersion);
  put_u32(os, static_cast<std::uint32_t>(values.rows()));
  put_u32(os, static_cast<std::uint32_t>(values.cols()));
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) put_f64(os, values(i, j));
  }
  const auto put_string = [&os](const std::string& s) {
    put_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
  };
  for (const auto& s : row_ids) put_string(s);
  for (const auto& s : col_ids) put_string(s);
  if (!os) throw validation_error("write to '" + path + "' failed");
}

void write_matrix_csv(const std::string& path, const Matrix& values) {
  auto os = open_out(path);
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) os << ',';
      os << format_double(values(i, j));
    }
    os << '\n';
  }
  if (!os) throw validation_error("write to '" + path + "' failed");
}

namespace {

LoadedMatrix read_matrix_binary(std::istream& is, const std::string& path) {
  char magic[4];
  is.read(magic, 4);
  const std::uint32_t version = get_u32(is);
  if (version != kKernelFormatVersion) {
    throw validation_error("'" + path + "': unsupported format version " +
                           std::to_string(version));
  }
  const std::uint32_t rows = get_u32(is);
  const std::uint32_t cols = get_u32(is);
  if (rows == 0 || cols == 0) throw validation_error("'" + path + "': empty matrix");
  LoadedMatrix out;
  out.values = Matrix(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) out.values(i, j) = get_f64(is);
  }
  // Optional id table: length-prefixed strings until EOF.
  std::vector<std::string> ids;
  for (;;) {
    unsigned char lenb[4];
    is.read(reinterpret_cast<char*>(lenb), 4);
    if (is.gcount() == 0) break;
    if (is.gcount() != 4) throw validation_error("'" + path + "': truncated id table");
    const std::uint32_t len = static_cast<std::uint32_t>(lenb[0]) |
                              (static_cast<std::uint32_t>(lenb[1]) << 8) |
                              (static_cast<std::uint32_t>(lenb[2]) << 16) |
                              (static_cast<std::uint32_t>(lenb[3]) << 24);
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (static_cast<std::uint32_t>(is.gcount()) != len) {
      throw validation_error("'" + path + "': truncated id string");
    }
    ids.push_back(std::move(s));
  }
  if (ids.empty()) return out;
  if (ids.size() == rows) {
    out.row_ids = std::move(ids);
    if (rows == cols) out.col_ids = out.row_ids;
  } else if (ids.size() == static_cast<std::size_t>(rows) + cols) {
    out.row_ids.assign(ids.begin(), ids.begin() + rows);
    out.col_ids.assign(ids.begin() + rows, ids.end());
  } else {
    throw validation_error("'" + path + "': id table must hold rows or rows+cols entries");
  }
  return out;
}

LoadedMatrix read_matrix_csv(const std::string& path) {
  auto is = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (fields.empty()) continue;
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw validation_error("'" + path + "': ragged CSV matrix");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw validation_error("'" + path + "': no numeric rows");
  LoadedMatrix out;
  out.values = Matrix(static_cast<Index>(rows.size()),
                      static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return out;
}

}  // namespace

LoadedMatrix read_matrix_file(const std::string& path) {
  auto is = open_in(path, std::ios::binary);
  char magic[4] = {0, 0, 0, 0};
  is.read(magic, 4);
  if (is.gcount() == 4 && std::memcmp(magic, kKernelMagic, 4) == 0) {
    is.seekg(0);
    return read_matrix_binary(is, path);
  }
  return read_matrix_csv(path);
}

LabelFile read_label_file(const std::string& path) {
  auto is = open_in(path);
  LabelFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) {
      throw validation_error("'" + path + "' line " + std::to_string(lineno) +
                             ": expected item_id,class_id");
    }
    out.item_ids.push_back(fields[0]);
    out.class_ids.push_back(static_cast<int>(parse_long(fields[1])));
  }
  if (out.item_ids.empty()) throw validation_error("'" + path + "': no labels");
  return out;
}

void write_label_file(const std::string& path, const LabelFile& labels) {
  auto os = open_out(path);
  for (std::size_t i = 0; i < labels.item_ids.size(); ++i) {
    os << labels.item_ids[i] << ',' << labels.class_ids[i] << '\n';
  }
  if (!os) throw validation_error("write to '" + path + "' failed");
}

LabelVector align_labels(const LabelFile& file, const std::vector<std::string>& item_ids) {
  std::unordered_map<std::string, int> by_id;
  bool duplicate = false;
  for (std::size_t i = 0; i < file.item_ids.size(); ++i) {
    duplicate |= !by_id.emplace(file.item_ids[i], file.class_ids[i]).second;
  }
  std::vector<int> raw;
  raw.reserve(item_ids.size());
  bool all_found = !duplicate && !item_ids.empty();
  if (all_found) {
    for (const auto& id : item_ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        all_found = false;
        break;
      }
      raw.push_back(it->second);
    }
  }
  if (!all_found) {
    // Fall back to file order (kernels without an id table).
    if (file.item_ids.size() != item_ids.size()) {
      throw validation_error("labels do not match kernel items by id, and counts "
                             "differ (" + std::to_string(file.item_ids.size()) +
                             " vs " + std::to_string(item_ids.size()) + ")");
    }
    raw = file.class_ids;
  }
  return make_label_vector(raw);
}

void write_latents_csv(const std::string& path, const Matrix& values,
                       const std::vector<std::string>& ids,
                       const std::map<std::string, std::string>& metadata) {
  if (static_cast<Index>(ids.size()) != values.rows()) {
    throw validation_error("latent ids and rows disagree");
  }
  auto os = open_out(path);
  for (const auto& [k, v] : metadata) os << "# " << k << '=' << v << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    os << ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < values.cols(); ++j) {
      os << ',' << format_double(values(i, j));
    }
    os << '\n';
  }
  if (!os) throw validation_error("write to '" + path + "' failed");
}

LatentsFile read_latents_csv(const std::string& path) {
  auto is = open_in(path);
  LatentsFile out;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (fields.size() < 2) {
      throw validation_error("'" + path + "': expected id,coords...");
    }
    out.ids.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) row.push_back(parse_double(fields[j]));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw validation_error("'" + path + "': ragged latent rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw validation_error("'" + path + "': no latent rows");
  out.values = Matrix(static_cast<Index>(rows.size()),
                      static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return out;
}

void save_model(const std::string& path, const ModelFile& mf) {
  const EmbeddingModel& m = mf.model;
  json j;
  j["format_version"] = kModelFormatVersion;
  j["task"] = task_name(m.task);
  j["sigma"] = m.sigma;
  j["combine"] = m.combine_rule == CombineRule::linear ? "linear" : "product";
  j["mu"] = vector_to_json(m.mu.mu);
  j["selected"] = m.selected;
  j["converged"] = m.converged;
  j["lambda"] = vector_to_json(m.lambda);
  j["gamma"] = matrix_to_json(m.gamma);
  if (m.xi) j["xi"] = matrix_to_json(*m.xi);
  j["train_ids_x"] = m.train_ids_x;
  if (!m.train_ids_z.empty()) j["train_ids_z"] = m.train_ids_z;

  json pre;
  pre["from_distance"] = mf.preprocess.from_distance;
  if (mf.preprocess.from_distance) pre["rbf_eta"] = mf.preprocess.rbf_eta;
  pre["centered"] = mf.preprocess.centered;
  if (mf.preprocess.centered) {
    json means = json::array();
    for (const auto& v : mf.preprocess.col_means) means.push_back(vector_to_json(v));
    pre["col_means"] = std::move(means);
  }
  pre["normalized"] = mf.preprocess.normalized;
  if (mf.preprocess.normalized) pre["scale"] = mf.preprocess.scale;
  pre["centered_z"] = mf.preprocess.centered_z;
  if (mf.preprocess.centered_z) {
    pre["col_means_z"] = vector_to_json(mf.preprocess.col_means_z);
  }
  j["preprocess"] = std::move(pre);
  j["config"] = mf.config_echo;

  auto os = open_out(path);
  os << j.dump(1) << '\n';
  if (!os) throw validation_error("write to '" + path + "' failed");
}

ModelFile load_model(const std::string& path) {
  auto is = open_in(path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw validation_error("'" + path + "': bad model file: " + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
      throw validation_error("'" + path + "': unsupported model format version");
    }
    ModelFile mf;
    EmbeddingModel& m = mf.model;
    m.task = task_from_name(j.at("task").get<std::string>());
    m.sigma = j.at("sigma").get<double>();
    m.combine_rule = j.at("combine").get<std::string>() == "product"
                         ? CombineRule::product
                         : CombineRule::linear;
    m.mu = SimplexWeights{vector_from_json(j.at("mu"))};
    m.selected = j.at("selected").get<std::vector<int>>();
    m.converged = j.at("converged").get<bool>();
    m.lambda = vector_from_json(j.at("lambda"));
    m.gamma = matrix_from_json(j.at("gamma"));
    if (j.contains("xi")) m.xi = matrix_from_json(j.at("xi"));
    m.train_ids_x = j.at("train_ids_x").get<std::vector<std::string>>();
    if (j.contains("train_ids_z")) {
      m.train_ids_z = j.at("train_ids_z").get<std::vector<std::string>>();
    }

    const json& pre = j.at("preprocess");
    mf.preprocess.from_distance = pre.at("from_distance").get<bool>();
    if (mf.preprocess.from_distance) {
      mf.preprocess.rbf_eta = pre.at("rbf_eta").get<std::vector<double>>();
    }
    mf.preprocess.centered = pre.at("centered").get<bool>();
    if (mf.preprocess.centered) {
      for (const auto& v : pre.at("col_means")) {
        mf.preprocess.col_means.push_back(vector_from_json(v));
      }
    }
    mf.preprocess.normalized = pre.at("normalized").get<bool>();
    if (mf.preprocess.normalized) {
      mf.preprocess.scale = pre.at("scale").get<std::vector<double>>();
    }
    mf.preprocess.centered_z = pre.value("centered_z", false);
    if (mf.preprocess.centered_z) {
      mf.preprocess.col_means_z = vector_from_json(pre.at("col_means_z"));
    }
    mf.config_echo = j.at("config").get<std::map<std::string, std::string>>();
    return mf;
  } catch (const json::exception& e) {
    throw validation_error("'" + path + "': bad model file: " + e.what());
  }
}

void write_classification_report(const std::string& path, const EvalReport& report) {
  auto os = open_out(path);
  for (const auto& [k, v] : report.metadata) os << "# " << k << '=' << v << '\n';
  os << "class,accuracy\n";
  for (const auto& [cls, acc] : report.per_class_accuracy) {
    os << cls << ',' << format_double(acc) << '\n';
  }
  os << "mean_per_class," << format_double(report.mean_per_class) << '\n';
  if (!os) throw validation_error("write to '" + path + "' failed");
}

void write_retrieval_report(const std::string& path, const EvalReport& report) {
  auto os = open_out(path);
  for (const auto& [k, v] : report.metadata) os << "# " << k << '=' << v << '\n';
  os << "query,ap\n";
  for (std::size_t q = 0; q < report.per_query_ap.size(); ++q) {
    os << q << ',' << format_double(report.per_query_ap[q]) << '\n';
  }
  os << "map," << format_double(report.map) << '\n';
  os << "skipped_queries," << report.skipped_queries << '\n';
  if (!os) throw validation_error("write to '" + path + "' failed");
}

void write_trace_csv(const std::string& path, const SilpState& state,
                     const std::map<std::string, std::string>& metadata) {
  auto os = open_out(path);
  for (const auto& [k, v] : metadata) os << "# " << k << '=' << v << '\n';
  os << "iteration,zeta,gap";
  const Index m = state.mu.size();
  for (Index i = 0; i < m; ++i) os << ",mu" << i;
  os << '\n';
  for (const auto& it : state.history) {
    os << it.iteration << ',' << format_double(it.zeta) << ',' << format_double(it.gap);
    for (Index i = 0; i < it.mu.size(); ++i) os << ',' << format_double(it.mu[i]);
    os << '\n';
  }
  if (!os) throw validation_error("write to '" + path + "' failed");
}

void write_oracle_table_csv(const std::string& path, const BruteForceResult& result,
                            const std::map<std::string, std::string>& metadata) {
  auto os = open_out(path);
  for (const auto& [k, v] : metadata) os << "# " << k << '=' << v << '\n';
  if (!result.table.empty()) {
    for (Index i = 0; i < result.table.front().mu.size(); ++i) {
      os << "mu" << i << ',';
    }
    os << "objective\n";
  }
  for (const auto& row : result.table) {
    for (Index i = 0; i < row.mu.size(); ++i) os << format_double(row.mu[i]) << ',';
    os << format_double(row.objective) << '\n';
  }
  if (!os) throw validation_error("write to '" + path + "' failed");
}

}  // namespace mklrt
