// Copyright 2026 The mtlbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mtlbench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or configuration mismatch detected before any computation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// API misuse, e.g. backward without a cached forward pass.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values in a loss, gradient or parameter.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Train-mode batch normalization over a single row.
class DegenerateBatchError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data or a header that does not match the schema.
class DataError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtlbench
