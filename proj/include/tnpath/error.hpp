// Copyright 2026 The tnpath Authors
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

namespace tnpath {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or out-of-range parameters (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A requested width/balance target cannot be met (exit code 3).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (exit code 4).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or numerical breakdown (exit code 5).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tnpath
