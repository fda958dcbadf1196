// Copyright 2026 The glrt-rmt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace glrt {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Cholesky pivot <= 0 on an input that must be Hermitian positive definite.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

class EigenError : public Error {
 public:
  using Error::Error;
};

class InvalidRootError : public Error {
 public:
  using Error::Error;
};

class SingularTrainingError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// I - T_N lost positive definiteness, so eta is undefined for this draw.
class DegenerateStatisticError : public Error {
 public:
  explicit DegenerateStatisticError(const std::string& what, long trial_index = -1)
      : Error(what), trial_index_(trial_index) {}

  // Index of the Monte-Carlo trial that failed, or -1 outside a batch.
  long trial_index() const noexcept { return trial_index_; }

 private:
  long trial_index_;
};

}  // namespace glrt
