// Copyright 2026 The obbloss Authors.
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

namespace obbloss {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A box with non-positive or non-finite fields.
class InvalidBoxError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its documented domain (alpha >= 4, delta <= 0, ...).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// A covariance that is not positive definite, or a singular sum of two.
class DegenerateCovarianceError : public Error {
 public:
  using Error::Error;
};

/// A loss evaluation produced NaN or infinity.
class NumericalFailureError : public Error {
 public:
  using Error::Error;
};

}  // namespace obbloss
