// Copyright 2026 The halfstable Authors
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

#ifndef HALFSTABLE_ERRORS_HPP
#define HALFSTABLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace halfstable {

/// Base class of all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An argument is outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// An adaptive scheme exhausted its subdivision budget above tolerance.
class NonConvergence : public Error {
public:
  explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

/// A test function is not smooth enough where the evaluation needs it.
class SingularityError : public Error {
public:
  explicit SingularityError(const std::string& msg) : Error(msg) {}
};

/// A log-log fit cannot be formed (too few points or non-positive means).
class DegenerateFit : public Error {
public:
  explicit DegenerateFit(const std::string& msg) : Error(msg) {}
};

/// The thinning majorant was exceeded by an actual kernel value.
class MajorantError : public Error {
public:
  explicit MajorantError(const std::string& msg) : Error(msg) {}
};

/// An experiment configuration failed validation.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace halfstable

#endif
