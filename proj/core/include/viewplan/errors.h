// Copyright 2026 The viewplan Authors. All Rights Reserved.
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

#ifndef VIEWPLAN_ERRORS_H_
#define VIEWPLAN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace viewplan {

// Raised when an argument violates an operation's precondition (bad
// dimensions, out-of-range values, degenerate geometry).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when reading or writing a file fails or its content is malformed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a linear-algebra routine fails, e.g. a kernel matrix that stays
// indefinite after the full jitter ladder.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double jitter)
      : std::runtime_error(what), jitter_(jitter) {}

  double jitter() const { return jitter_; }

 private:
  double jitter_;
};

}  // namespace viewplan

#endif  // VIEWPLAN_ERRORS_H_
