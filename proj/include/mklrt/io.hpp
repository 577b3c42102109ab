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

#ifndef MKLRT_IO_HPP
#define MKLRT_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mklrt/eval.hpp"
#include "mklrt/instances.hpp"
#include "mklrt/oracle.hpp"
#include "mklrt/pipeline.hpp"
#include "mklrt/silp.hpp"
#include "mklrt/types.hpp"

namespace mklrt {

// Binary matrix format: magic "MKLK", then format version (1), rows and
// cols as unsigned 32-bit little-endian, then row-major IEEE-754 doubles
// little-endian, then an optional id table of length-prefixed UTF-8
// strings (row ids, or row ids followed by column ids).
inline constexpr char kKernelMagic[4] = {'M', 'K', 'L', 'K'};
inline constexpr std::uint32_t kKernelFormatVersion = 1;

struct LoadedMatrix {
  Matrix values;
  std::vector<std::string> row_ids;  // empty when the file carries none
  std::vector<std::string> col_ids;
};

/// Writes the binary format. Ids are optional; for square matrices pass
/// the item ids as row_ids and leave col_ids empty.
void write_matrix_binary(const std::string& path, const Matrix& values,
                         const std::vector<std::string>& row_ids = {},
                         const std::vector<std::string>& col_ids = {});

/// Plain numeric grid, one row per line, comma separated, no header.
void write_matrix_csv(const std::string& path, const Matrix& values);

/// Reads either format, sniffing the magic bytes.
LoadedMatrix read_matrix_file(const std::string& path);

// --- labels ----------------------------------------------------------------

/// Two-column CSV item_id,class_id.
struct LabelFile {
  std::vector<std::string> item_ids;
  std::vector<int> class_ids;
};
LabelFile read_label_file(const std::string& path);
void write_label_file(const std::string& path, const LabelFile& labels);

/// Aligns a label file with kernel items (by id when possible, by order
/// otherwise) and remaps classes to 1..P.
LabelVector align_labels(const LabelFile& file, const std::vector<std::string>& item_ids);

// --- latents ---------------------------------------------------------------

struct LatentsFile {
  Matrix values;
  std::vector<std::string> ids;
};
void write_latents_csv(const std::string& path, const Matrix& values,
                       const std::vector<std::string>& ids,
                       const std::map<std::string, std::string>& metadata);
LatentsFile read_latents_csv(const std::string& path);

// --- model -----------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  EmbeddingModel model;
  Preprocess preprocess;
  std::map<std::string, std::string> config_echo;  // seed and friends
};

/// JSON with shortest round-trip float serialization: save/load/save is
/// byte-identical.
void save_model(const std::string& path, const ModelFile& mf);
ModelFile load_model(const std::string& path);

// --- reports and traces ------------------------------------------------------

void write_classification_report(const std::string& path, const EvalReport& report);
void write_retrieval_report(const std::string& path, const EvalReport& report);
void write_trace_csv(const std::string& path, const SilpState& state,
                     const std::map<std::string, std::string>& metadata = {});
void write_oracle_table_csv(const std::string& path, const BruteForceResult& result,
                            const std::map<std::string, std::string>& metadata);

}  // namespace mklrt

#endif  // MKLRT_IO_HPP
