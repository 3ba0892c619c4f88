// Copyright 2026 The walkbirch Authors.
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

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace walkbirch {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Errc {
  MissingColumn,
  ParseError,
  IoError,
  EmptySubset,
  MissingSubsetKey,
  InvalidSpec,
  InvalidConfig,
  NonFiniteInput,
  DimensionMismatch,
  EmptyCf,
  Underfull,
  EmptyInput,
  NoEntries,
  DegenerateClustering,
  TooFewRows,
  TooFewFeatures,
  LengthMismatch,
  UnknownActivity,
  NonFiniteObjective,
  EmptyConfusion,
};

/// Library error with a machine-checkable code; the message carries
/// positional detail (row/column) where the failure has one.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace walkbirch
