// Copyright 2026 The qamut Authors
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

namespace qamut {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid signal specification or malformed control points.
class SpecificationError : public Error {
 public:
  using Error::Error;
};

// A pair of control points (or a mutation) that violates the rate bound.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Mismatched lengths or dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Problem too large for a solver or a hardware topology.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Network failure talking to a remote sampler. Timeouts and refused
// connections are retryable.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

// A remote response whose contents disagree with local recomputation.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A sampler failed while solving one sub-problem.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace qamut
