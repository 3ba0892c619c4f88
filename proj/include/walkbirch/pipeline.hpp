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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "walkbirch/birch.hpp"
#include "walkbirch/dataset.hpp"
#include "walkbirch/metrics.hpp"
#include "walkbirch/random_walk.hpp"

namespace walkbirch {

enum class Variant { Baseline, Improved };

std::string_view to_string(Variant variant);

/// One clustering run over one subset. Scores are present when the input
/// carried ground-truth labels; the key path only on the improved variant.
struct RunResult {
  std::string id;
  Variant variant = Variant::Baseline;
  ClusterModel model;
  Assignment assignment;
  std::optional<KeyPath> key_path;
  double wall_time_s = 0;
  std::optional<ScoreBundle> scores;
  std::vector<std::int64_t> outlier_rows;
};

/// Clusters the full feature set; the clock covers fit_predict only.
RunResult run_baseline(const std::string& id, const FeatureMatrix& matrix,
                       const BirchConfig& config);

/// Key-path extraction, projection, then clustering of the projected
/// matrix; the clock covers all three phases.
RunResult run_improved(const std::string& id, const FeatureMatrix& matrix,
                       const BirchConfig& birch_config,
                       const WalkConfig& walk_config, double top_fraction);

/// Paired outcome for one subset; `error` is empty on success. Failures
/// stay in the comparison instead of aborting the batch.
struct SubsetOutcome {
  std::string id;
  std::optional<RunResult> baseline;
  std::optional<RunResult> improved;
  std::optional<ScoreBundle> score_delta;  // improved - baseline
  std::optional<double> time_ratio;        // improved / baseline
  std::string error;

  bool ok() const { return error.empty(); }
};

struct Comparison {
  std::vector<SubsetOutcome> rows;
};

struct CompareConfig {
  BirchConfig birch;
  WalkConfig walk;
  double top_fraction = 0.6;
  int workers = 1;
};

/// Runs both variants per matrix, optionally across a bounded worker
/// pool. Rows keep the input order. Per-subset walk seeds derive from
/// walk.seed and the subset position, so reruns reproduce every output.
Comparison compare(
    std::span<const std::pair<std::string, FeatureMatrix>> matrices,
    const CompareConfig& config);

/// `id,variant,clusters,precise,accuracy,recall,f_score,time_s,key_path`
/// rows, two per subset. time_s is wall-clock and machine-dependent;
/// every other cell is deterministic for fixed seeds.
std::string comparison_csv(const Comparison& comparison);

}  // namespace walkbirch
