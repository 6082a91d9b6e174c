// Copyright 2026 The tailproc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TAILPROC_ERRORS_HPP_
#define TAILPROC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tailproc {

// Precondition and domain violations throw std::invalid_argument (or
// std::domain_error where a quantity does not exist mathematically).
// Failures of an otherwise well-posed numerical procedure throw
// NumericalError so callers can tell the two apart.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tailproc

#endif  // TAILPROC_ERRORS_HPP_
