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

#include "mklrt/pipeline.hpp"

#include "mklrt/errors.hpp"
#include "mklrt/kernel_ops.hpp"

namespace mklrt {

std::vector<KernelMatrix> preprocess_train(const std::vector<Matrix>& raw,
                                           const std::vector<std::vector<std::string>>& ids,
                                           const PreprocessFlags& flags,
                                           Preprocess& record) {
  if (raw.empty()) throw validation_error("no input matrices");
  if (ids.size() != raw.size()) {
    throw validation_error("id lists and matrices disagree in count");
  }
  record = Preprocess{};
  record.from_distance = flags.from_distance;
  record.centered = flags.center;
  record.normalized = flags.normalize;

  std::vector<KernelMatrix> kernels;
  kernels.reserve(raw.size());
  for (std::size_t m = 0; m < raw.size(); ++m) {
    KernelMatrix k;
    if (flags.from_distance) {
      const DistanceMatrix d = make_distance_matrix(raw[m]);
      record.rbf_eta.push_back(rbf_bandwidth(d));
      k = rbf_from_distance(d);
      k.item_ids = ids[m].empty() ? k.item_ids : ids[m];
      if (!ids[m].empty() && static_cast<Index>(ids[m].size()) != k.size()) {
        throw validation_error("id count does not match matrix size");
      }
    } else {
      k = make_kernel(raw[m], ids[m]);
    }
    if (flags.center) {
      record.col_means.push_back(k.values.colwise().mean());
      k = center_train(k);
    }
    if (flags.normalize) {
      const double tr = k.values.trace();
      if (!(tr > 0.0)) {
        throw validation_error("kernel " + std::to_string(m) +
                               " has nonpositive trace; cannot normalize");
      }
      record.scale.push_back(static_cast<double>(k.size()) / tr);
      k = normalize_trace(k);
    }
    kernels.push_back(std::move(k));
  }
  return kernels;
}

std::vector<CrossKernelMatrix> preprocess_test(
    const std::vector<Matrix>& raw, const std::vector<std::vector<std::string>>& test_ids,
    const std::vector<std::string>& train_ids, const Preprocess& record) {
  if (raw.empty()) throw validation_error("no input matrices");
  if (test_ids.size() != raw.size()) {
    throw validation_error("id lists and matrices disagree in count");
  }
  if (record.from_distance && record.rbf_eta.size() != raw.size()) {
    throw validation_error("model records a different kernel count (rbf)");
  }
  if (record.centered && record.col_means.size() != raw.size()) {
    throw validation_error("model records a different kernel count (centering)");
  }
  if (record.normalized && record.scale.size() != raw.size()) {
    throw validation_error("model records a different kernel count (scaling)");
  }

  std::vector<CrossKernelMatrix> out;
  out.reserve(raw.size());
  for (std::size_t m = 0; m < raw.size(); ++m) {
    Matrix values = raw[m];
    if (static_cast<Index>(train_ids.size()) != values.cols()) {
      throw validation_error("test matrix " + std::to_string(m) +
                             " columns do not match the training size");
    }
    if (record.from_distance) {
      if ((values.array() < 0.0).any()) {
        throw validation_error("distance inputs must be nonnegative");
      }
      values = (-values.array() / record.rbf_eta[m]).exp();
    }
    if (record.centered) {
      values = center_cross_values(values, record.col_means[m]);
    }
    if (record.normalized) {
      values *= record.scale[m];
    }
    out.push_back(make_cross_kernel(std::move(values), test_ids[m], train_ids));
  }
  return out;
}

KernelMatrix preprocess_train_z(KernelMatrix kz, bool center, Preprocess& record) {
  record.centered_z = center;
  if (center) {
    record.col_means_z = kz.values.colwise().mean();
    kz = center_train(kz);
  }
  return kz;
}

CrossKernelMatrix preprocess_test_z(Matrix raw, std::vector<std::string> test_ids,
                                    const std::vector<std::string>& train_ids,
                                    const Preprocess& record) {
  if (static_cast<Index>(train_ids.size()) != raw.cols()) {
    throw validation_error("second-view test matrix columns do not match training size");
  }
  if (record.centered_z) {
    if (record.col_means_z.size() != raw.cols()) {
      throw validation_error("model records a different second-view size");
    }
    raw = center_cross_values(raw, record.col_means_z);
  }
  return make_cross_kernel(std::move(raw), std::move(test_ids), train_ids);
}

}  // namespace mklrt
