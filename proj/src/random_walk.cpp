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

#include "walkbirch/random_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "walkbirch/format.hpp"

namespace walkbirch {

double pearson(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) fail(Errc::LengthMismatch, "pearson: lengths differ");
  const auto n = static_cast<double>(x.size());
  Vector dx = x.array() - x.mean();
  Vector dy = y.array() - y.mean();
  double sx = dx.squaredNorm();
  double sy = dy.squaredNorm();
  if (sx == 0.0 || sy == 0.0) return 0.0;  // constant column convention
  (void)n;
  return dx.dot(dy) / std::sqrt(sx * sy);
}

ActivityGraph build_activity_graph(const FeatureMatrix& matrix) {
  if (matrix.row_count() < 2)
    fail(Errc::TooFewRows, "activity graph needs at least 2 rows");
  if (matrix.feature_count() < 2)
    fail(Errc::TooFewFeatures, "activity graph needs at least 2 features");

  const Index d = matrix.feature_count();
  ActivityGraph graph;
  graph.vertices = matrix.feature_names;
  graph.weights = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      double w = pearson(matrix.rows.col(i), matrix.rows.col(j));
      graph.weights(i, j) = w;
      graph.weights(j, i) = w;
    }
  }
  return graph;
}

TransitionMatrix transition_matrix(const ActivityGraph& graph) {
  const Index d = graph.weights.rows();
  if (d < 2) fail(Errc::TooFewFeatures, "transition matrix needs >= 2 vertices");

  TransitionMatrix tm;
  tm.p = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    double mass = 0;
    for (Index j = 0; j < d; ++j)
      if (j != i) mass += std::max(graph.weights(i, j), 0.0);
    if (mass > 0) {
      for (Index j = 0; j < d; ++j)
        if (j != i) tm.p(i, j) = std::max(graph.weights(i, j), 0.0) / mass;
    } else {
      // No positive neighbors: the walker moves uniformly.
      for (Index j = 0; j < d; ++j)
        if (j != i) tm.p(i, j) = 1.0 / static_cast<double>(d - 1);
    }
  }
  return tm;
}

void WalkConfig::validate() const {
  if (!(lambda0 > 0)) fail(Errc::InvalidConfig, "lambda0 must be positive");
  if (!(epsilon > 0) || epsilon >= lambda0)
    fail(Errc::InvalidConfig, "epsilon must lie in (0, lambda0)");
  if (max_tries < 1) fail(Errc::InvalidConfig, "max_tries must be >= 1");
  if (steps < 0) fail(Errc::InvalidConfig, "steps must be >= 0");
}

Vector graph_walk(const TransitionMatrix& tm, const WalkConfig& config) {
  config.validate();
  const Index d = tm.p.rows();
  const int steps = config.steps > 0 ? config.steps : 10 * static_cast<int>(d);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_start = [&] {
    return std::min<Index>(static_cast<Index>(unit(rng) * static_cast<double>(d)),
                           d - 1);
  };

  Eigen::VectorXi counts = Eigen::VectorXi::Zero(d);
  Index at = draw_start();
  counts[at] += 1;
  for (int s = 0; s < steps; ++s) {
    double u = unit(rng);
    double cumulative = 0;
    Index next = d - 1;  // guard against rounding shortfall in the row sum
    for (Index j = 0; j < d; ++j) {
      cumulative += tm.p(at, j);
      if (u < cumulative) {
        next = j;
        break;
      }
    }
    at = next;
    counts[at] += 1;
  }
  return counts.cast<double>() / static_cast<double>(steps + 1);
}

DescentResult rw_descent(const Objective& f, const Vector& x0,
                         const WalkConfig& config) {
  config.validate();
  if (x0.size() == 0)
    fail(Errc::InvalidConfig, "rw_descent needs a nonempty start point");
  auto evaluate = [&](const Vector& x) {
    double value = f(x);
    if (!std::isfinite(value))
      fail(Errc::NonFiniteObjective, "objective returned a non-finite value");
    return value;
  };

  DescentResult result;
  result.x_best = x0;
  result.f_best = evaluate(x0);
  result.evaluations = 1;

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const Index n = x0.size();

  double lambda = config.lambda0;
  int failures = 0;
  while (true) {
    Vector direction(n);
    double norm = 0;
    do {
      for (Index i = 0; i < n; ++i) direction[i] = sym(rng);
      norm = direction.norm();
    } while (norm == 0.0);
    direction /= norm;

    Vector candidate = result.x_best + lambda * direction;
    double value = evaluate(candidate);
    ++result.evaluations;

    if (value < result.f_best) {
      result.x_best = std::move(candidate);
      result.f_best = value;
      result.accepted_trace.push_back(value);
      ++result.rounds;  // acceptance closes the current round
      failures = 0;
      continue;
    }
    if (++failures < config.max_tries) continue;

    // Round exhausted: shrink the step and start over.
    ++result.rounds;
    failures = 0;
    lambda /= 2;
    if (lambda < config.epsilon) break;
  }
  result.final_step = lambda;
  return result;
}

Objective correlation_objective(const ActivityGraph& graph) {
  Matrix weights = graph.weights;
  return [weights](const Vector& x) {
    Vector clipped = x.cwiseMax(0.0).cwiseMin(1.0);
    // -1/2 x'Wx with a zero diagonal counts each pair once.
    return -0.5 * clipped.dot(weights * clipped);
  };
}

std::string KeyPath::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < activities.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += to_string(activities[i]);
    out += ',';
    out += format_number(scores[i]);
    out += '\n';
  }
  return out;
}

KeyPath extract_key_path(const FeatureMatrix& matrix, const WalkConfig& config,
                         double top_fraction) {
  if (!(top_fraction > 0) || top_fraction > 1)
    fail(Errc::InvalidConfig, "top_fraction must lie in (0, 1]");
  ActivityGraph graph = build_activity_graph(matrix);
  TransitionMatrix tm = transition_matrix(graph);
  Vector frequency = graph_walk(tm, config);

  const Index d = frequency.size();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (frequency[a] != frequency[b]) return frequency[a] > frequency[b];
    return catalog_index(graph.vertices[static_cast<std::size_t>(a)]) <
           catalog_index(graph.vertices[static_cast<std::size_t>(b)]);
  });

  auto want = static_cast<Index>(
      std::ceil(top_fraction * static_cast<double>(d)));
  Index keep = std::min(d, std::max<Index>(2, want));

  KeyPath path;
  for (Index i = 0; i < keep; ++i) {
    path.activities.push_back(
        graph.vertices[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    path.scores.push_back(frequency[order[static_cast<std::size_t>(i)]]);
  }
  return path;
}

FeatureMatrix project_features(const FeatureMatrix& matrix,
                               const KeyPath& path) {
  FeatureMatrix out;
  out.subset = matrix.subset;
  out.learner_ids = matrix.learner_ids;
  out.labels = matrix.labels;
  out.feature_names = path.activities;
  out.rows = Matrix(matrix.row_count(),
                    static_cast<Index>(path.activities.size()));
  for (std::size_t c = 0; c < path.activities.size(); ++c) {
    auto it = std::find(matrix.feature_names.begin(),
                        matrix.feature_names.end(), path.activities[c]);
    if (it == matrix.feature_names.end())
      fail(Errc::UnknownActivity,
           "path activity '" +
               std::string(to_string(path.activities[c])) +
               "' missing from the matrix");
    out.rows.col(static_cast<Index>(c)) =
        matrix.rows.col(it - matrix.feature_names.begin());
  }
  return out;
}

}  // namespace walkbirch
