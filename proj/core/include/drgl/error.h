// Copyright 2026 The DRGL Authors
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

#ifndef DRGL_ERROR_H_
#define DRGL_ERROR_H_

#include <stdexcept>
#include <string>

namespace drgl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad shape, bad range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed experiment configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical routine produced a non-finite value it cannot recover from.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace drgl

#endif  // DRGL_ERROR_H_
