// Copyright 2026 The stablematch Authors
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

#ifndef STABLEMATCH_ERRORS_HPP_
#define STABLEMATCH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace stablematch {

// Base of every error raised by the library. The CLI maps CapacityError to
// exit code 3 and everything else to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or indices that do not fit together.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Inputs outside an operation's mathematical domain (e.g. non-IR allocation
// handed to kappa).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Algorithm / instance combinations that do not apply, bad generator params.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or schema-violating instance files.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration would exceed the support budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace stablematch

#endif  // STABLEMATCH_ERRORS_HPP_
