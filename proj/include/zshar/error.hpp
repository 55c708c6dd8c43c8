// Copyright 2026 The zshar Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace zshar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or vector shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid hyperparameter, flag or option value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed, inconsistent or missing input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Class split constraints cannot be satisfied.
class SplitError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value encountered in a numeric computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint is truncated, corrupt or written by an incompatible version.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace zshar
