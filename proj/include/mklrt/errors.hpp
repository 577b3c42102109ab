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

#ifndef MKLRT_ERRORS_HPP
#define MKLRT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mklrt {

/// Bad or inconsistent input: mismatched dimensions, broken invariants,
/// malformed files. Maps to process exit code 1 in the CLI.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical operation failed (factorization breakdown, non-finite
/// values). Maps to process exit code 2 in the CLI.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mklrt

#endif  // MKLRT_ERRORS_HPP
