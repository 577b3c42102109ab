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

#ifndef MKLRT_BASELINES_HPP
#define MKLRT_BASELINES_HPP

#include <functional>
#include <vector>

#include "mklrt/types.hpp"

namespace mklrt {

/// Arithmetic mean kernel (1/M) sum_m K^m.
KernelMatrix average_kernel(const std::vector<KernelMatrix>& kernels);

/// Entrywise geometric mean (prod_m K^m)^(1/M). Requires strictly
/// positive entries. PSD-ness is not guaranteed and not enforced here;
/// validate on demand via is_psd.
KernelMatrix product_kernel(const std::vector<KernelMatrix>& kernels);

/// Best single kernel by selector score (e.g. cross-validated accuracy).
/// Non-finite scores are skipped; ties break to the smallest index.
/// Returns the 0-based index of the winner.
int best_individual_kernel(const std::vector<KernelMatrix>& kernels,
                           const std::function<double(int, const KernelMatrix&)>& score);

}  // namespace mklrt

#endif  // MKLRT_BASELINES_HPP
