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

#include "mklrt/baselines.hpp"

#include <cmath>

#include "mklrt/errors.hpp"
#include "mklrt/kernel_ops.hpp"

namespace mklrt {

KernelMatrix average_kernel(const std::vector<KernelMatrix>& kernels) {
  return combine(SimplexWeights::uniform(static_cast<Index>(kernels.size())), kernels);
}

KernelMatrix product_kernel(const std::vector<KernelMatrix>& kernels) {
  return combine_product(SimplexWeights::uniform(static_cast<Index>(kernels.size())),
                         kernels);
}

int best_individual_kernel(const std::vector<KernelMatrix>& kernels,
                           const std::function<double(int, const KernelMatrix&)>& score) {
  if (kernels.empty()) throw validation_error("no kernels given");
  int best = -1;
  double best_score = 0.0;
  for (std::size_t m = 0; m < kernels.size(); ++m) {
    const double s = score(static_cast<int>(m), kernels[m]);
    if (!std::isfinite(s)) continue;
    if (best < 0 || s > best_score) {
      best = static_cast<int>(m);
      best_score = s;
    }
  }
  if (best < 0) throw numerical_error("every kernel selector score was non-finite");
  return best;
}

}  // namespace mklrt
