// Copyright 2026 The fockgen Authors
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

namespace fockgen {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid input or configuration (bad dimensions, out-of-range values).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// The numerics could not produce a meaningful result.
class NumericalError : public Error {
  public:
    using Error::Error;
};

class TailMassExceeded : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class DimensionMismatch : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

class TruncationTooLarge : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

/// The post-selected branch has (numerically) zero probability.
class VanishingBranch : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class DegenerateTarget : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

class InconsistentStrategy : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

/// Config document does not match the schema. `path()` is a JSON pointer-ish
/// location such as `$.strategy.q`.
class SchemaError : public ConfigError {
  public:
    SchemaError(std::string path, const std::string &what)
        : ConfigError(path + ": " + what), path_(std::move(path)) {}
    const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

class ValueError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

} // namespace fockgen
