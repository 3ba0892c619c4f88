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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "walkbirch/activity.hpp"
#include "walkbirch/dataset.hpp"
#include "walkbirch/types.hpp"

namespace walkbirch {

/// Activity features as vertices, pairwise Pearson correlation of their
/// click-rate columns as edge weights. Symmetric, zero diagonal.
struct ActivityGraph {
  std::vector<ActivityKind> vertices;
  Matrix weights;
};

/// Pearson coefficient of two equal-length vectors; 0 by convention when
/// either is constant. Throws LengthMismatch.
double pearson(const Vector& x, const Vector& y);

/// Correlation graph over the matrix's feature columns. Throws TooFewRows
/// / TooFewFeatures below 2x2.
ActivityGraph build_activity_graph(const FeatureMatrix& matrix);

/// Row-stochastic walk matrix from the positive part of the edge weights.
/// Rows without positive mass fall back to uniform over the other
/// vertices.
struct TransitionMatrix {
  Matrix p;
};

TransitionMatrix transition_matrix(const ActivityGraph& graph);

struct WalkConfig {
  double lambda0 = 1.0;   // initial step length
  double epsilon = 1e-4;  // termination accuracy, in (0, lambda0)
  int max_tries = 100;    // consecutive failures per round
  std::uint64_t seed = 0;
  int steps = 0;  // walk length; 0 means 10 * vertex count

  void validate() const;  // throws InvalidConfig
};

/// Simulates one walker for `steps` transitions from a uniformly random
/// start vertex; returns visit frequencies (counts / (steps + 1)).
/// Deterministic for a fixed seed.
Vector graph_walk(const TransitionMatrix& tm, const WalkConfig& config);

using Objective = std::function<double(const Vector&)>;

struct DescentResult {
  Vector x_best;
  double f_best = 0;
  int rounds = 0;  // windows ended by an acceptance or by exhaustion
  std::int64_t evaluations = 0;
  double final_step = 0;  // lambda at termination, always < epsilon
  std::vector<double> accepted_trace;  // objective value after each accept
};

/// Randomized direction descent: normalized uniform direction, step of
/// length lambda, accept on strict decrease; after max_tries consecutive
/// failures the step halves and a new round begins; stops when the step
/// falls below epsilon. Throws NonFiniteObjective when f leaves the finite
/// range at a probed point.
DescentResult rw_descent(const Objective& f, const Vector& x0,
                         const WalkConfig& config);

/// Default objective for descent-driven selection: rewards coordinate
/// pairs joined by positive correlation, x clipped to the unit box.
Objective correlation_objective(const ActivityGraph& graph);

/// Activities ranked by walk visit frequency, most visited first.
struct KeyPath {
  std::vector<ActivityKind> activities;
  std::vector<double> scores;

  /// One `<rank>,<activity>,<score>` line per activity.
  std::string to_text() const;
};

/// Graph walk over the matrix's correlation structure; keeps the
/// ceil(top_fraction * n) most visited activities (at least 2), ordered by
/// descending frequency with catalog-order ties.
KeyPath extract_key_path(const FeatureMatrix& matrix, const WalkConfig& config,
                         double top_fraction);

/// Restricts the matrix to the path's activities, columns in path order;
/// rows and labels unchanged. Throws UnknownActivity.
FeatureMatrix project_features(const FeatureMatrix& matrix,
                               const KeyPath& path);

}  // namespace walkbirch
