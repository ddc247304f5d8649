// Copyright 2026 The Prefrank Authors.
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

#ifndef PREFRANK_ERRORS_HPP_
#define PREFRANK_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace prefrank {

// Process exit codes. Stable for scripting.
enum class ExitCode : int {
  kOk = 0,
  kInput = 2,
  kEstimation = 3,
  kStructure = 4,
  kSimulation = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ExitCode exit_code() const { return code_; }

 private:
  ExitCode code_;
};

// Malformed or inconsistent input data. Carries the source and line when the
// problem can be pinned to one (line 0 otherwise).
class InputError : public Error {
 public:
  enum class Kind {
    kIo,
    kHeader,
    kMalformedRow,
    kNonInteger,
    kNonDecimal,
    kOutOfRange,
    kEnrolledExceedsAdmits,
    kDuplicateId,
    kBoundsOrder,
    kShareBelowLower,
    kShareAboveUpper,
    kSelfPair,
    kIntervalMismatch,
    kUnknownId,
    kDuplicatePair,
    kReciprocalContradiction,
    kInvalidArgument,
  };

  InputError(Kind kind, const std::string& message, std::string source = {},
             int line = 0)
      : Error(ExitCode::kInput, Format(message, source, line)),
        kind_(kind),
        source_(std::move(source)),
        line_(line) {}

  Kind kind() const { return kind_; }
  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  static std::string Format(const std::string& message,
                            const std::string& source, int line) {
    std::string out = message;
    if (line > 0) out += ", line " + std::to_string(line);
    if (!source.empty()) out = source + ": " + out;
    return out;
  }

  Kind kind_;
  std::string source_;
  int line_;
};

// Arguments outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ExitCode::kEstimation, what) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what)
      : Error(ExitCode::kEstimation, what) {}
};

// A derivative whose perturbation direction does not exist (e.g. P_ii = 1).
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what)
      : Error(ExitCode::kStructure, what) {}
};

class SimulationError : public Error {
 public:
  explicit SimulationError(const std::string& what)
      : Error(ExitCode::kSimulation, what) {}
};

}  // namespace prefrank

#endif  // PREFRANK_ERRORS_HPP_
