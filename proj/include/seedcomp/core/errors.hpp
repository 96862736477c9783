// Copyright 2026 The seedcomp Authors
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

namespace seedcomp {

// Error hierarchy shared by all modules. Each maps to one failure class so
// callers (notably the CLI) can choose an exit status from the type alone.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform for a primitive.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An index refers outside its container.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated (k > N, empty input, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf or another numerical breakdown.
class NumericsError : public Error {
 public:
  using Error::Error;
};

/// Binary checkpoint is malformed or does not match the model.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Text input (point files, config files) could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace seedcomp
