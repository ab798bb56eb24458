// Copyright 2026 The coarse-metrology Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace coarse_metrology {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions or hit a non-finite value.
class QuadratureError : public Error {
  public:
    QuadratureError(const std::string &what, double error_estimate)
        : Error(what), error_estimate_(error_estimate) {}

    [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

  private:
    double error_estimate_;
};

/// The bracket handed to a root finder contains no sign change.
class NoSignChange : public Error {
  public:
    using Error::Error;
};

/// No finite optimum exists (e.g. zero dephasing rate).
class DivergenceError : public Error {
  public:
    using Error::Error;
};

/// Scenario combination that has no defined model.
class UnsupportedScenario : public Error {
  public:
    using Error::Error;
};

} // namespace coarse_metrology
