// Copyright 2026 The vccsim Authors
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

namespace vcc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constraint-set geometry.
class NonUnitDirection : public Error {
 public:
  using Error::Error;
};
class EmptyReach : public Error {
 public:
  using Error::Error;
};

// Graphs and schedules.
class InconsistentDimensions : public Error {
 public:
  using Error::Error;
};
class WindowBoundViolation : public Error {
 public:
  using Error::Error;
};

// Configuration and harness (declared early so more specific validation
// failures can derive from it).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Gains and protocol stepping.
class GainOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class FloorConflict : public Error {
 public:
  using Error::Error;
};
class BufferUnderflow : public Error {
 public:
  using Error::Error;
};
class PolicyViolation : public Error {
 public:
  using Error::Error;
};

// Matrix analysis.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class NonScalarState : public Error {
 public:
  using Error::Error;
};
class StochasticityViolation : public Error {
 public:
  using Error::Error;
};
class InsufficientHorizon : public Error {
 public:
  using Error::Error;
};
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

// Configuration and harness.
class ParseError : public Error {
 public:
  using Error::Error;
};
class AcceptanceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace vcc
