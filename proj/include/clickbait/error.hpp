// Copyright 2026 The clickbait-hybrid Authors.
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

namespace clickbait {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Input bytes could not be interpreted (malformed rows, truncated files).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A remote service answered with something the protocol does not allow.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// The remote service kept failing after all retries.
class ServiceError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage was requested before the stage producing its input.
class DependencyError : public Error {
 public:
  using Error::Error;
};

// Numerical training blew up (non-finite loss or weights).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace clickbait
