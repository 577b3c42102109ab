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

#ifndef MKLRT_PIPELINE_HPP
#define MKLRT_PIPELINE_HPP

#include <vector>

#include "mklrt/types.hpp"

namespace mklrt {

/// Everything applied to the raw per-kernel inputs before training, in
/// application order: distance-to-RBF conversion, centering, trace
/// normalization. A saved model carries this record so out-of-sample
/// inputs go through the identical transform.
struct Preprocess {
  bool from_distance = false;
  std::vector<double> rbf_eta;      // per kernel, when from_distance

  bool centered = false;
  std::vector<Vector> col_means;    // training column means per kernel, when centered

  bool normalized = false;
  std::vector<double> scale;        // per kernel, when normalized

  bool centered_z = false;          // second-view kernel centering
  Vector col_means_z;
};

struct PreprocessFlags {
  bool from_distance = false;
  bool center = false;
  bool normalize = false;
  bool center_z = false;
};

/// Turns raw training inputs (kernel or distance matrices) into the
/// kernels used for fitting, recording the transform.
std::vector<KernelMatrix> preprocess_train(const std::vector<Matrix>& raw,
                                           const std::vector<std::vector<std::string>>& ids,
                                           const PreprocessFlags& flags, Preprocess& record);

/// Applies a recorded transform to raw test-vs-train inputs.
std::vector<CrossKernelMatrix> preprocess_test(
    const std::vector<Matrix>& raw, const std::vector<std::vector<std::string>>& test_ids,
    const std::vector<std::string>& train_ids, const Preprocess& record);

/// Second-view companions: the single kernel K^z, optionally centered.
KernelMatrix preprocess_train_z(KernelMatrix kz, bool center, Preprocess& record);
CrossKernelMatrix preprocess_test_z(Matrix raw, std::vector<std::string> test_ids,
                                    const std::vector<std::string>& train_ids,
                                    const Preprocess& record);

}  // namespace mklrt

#endif  // MKLRT_PIPELINE_HPP
