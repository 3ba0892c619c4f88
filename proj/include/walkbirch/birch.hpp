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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "walkbirch/cf_tree.hpp"
#include "walkbirch/dataset.hpp"
#include "walkbirch/types.hpp"

namespace walkbirch {

/// Tree parameters plus the outlier rule and exactly one global stopping
/// rule: a merge-distance cap or a target cluster count.
struct BirchConfig {
  TreeParams tree;
  int outlier_min_points = 1;  // leaf entries below this point count drop out
  std::optional<double> merge_distance;
  std::optional<int> cluster_count;

  void validate() const;  // throws InvalidConfig
};

struct ClusterModel {
  std::vector<Vector> centroids;
  std::vector<ClusteringFeature> cluster_cfs;
  std::vector<ClusteringFeature> outlier_cfs;
  BirchConfig config;
  std::vector<double> merge_trace;  // accepted merge distances, in order

  Index cluster_count() const { return static_cast<Index>(centroids.size()); }
};

struct Assignment {
  std::vector<int> labels;
};

/// Inserts every matrix row, in row order, into a fresh tree. Throws
/// EmptyInput.
CfTree build_tree(const FeatureMatrix& matrix, const BirchConfig& config);

/// Splits leaf entries into (kept, outliers) by the minimum point count,
/// preserving chain order on both sides.
std::pair<std::vector<ClusteringFeature>, std::vector<ClusteringFeature>>
filter_outliers(const CfTree& tree, const BirchConfig& config);

/// Agglomerative merging over entry centroids: repeatedly joins the
/// closest pair (lexicographic smallest pair on ties) while the closest
/// distance stays within merge_distance, or until cluster_count remain.
/// Merged clusters are summary sums. Throws NoEntries.
ClusterModel global_cluster(std::span<const ClusteringFeature> entries,
                            const BirchConfig& config);

/// Nearest-centroid label per row, ties to the lowest cluster index.
/// Throws DimensionMismatch.
Assignment assign_points(const FeatureMatrix& matrix,
                         const ClusterModel& model);

struct FitResult {
  ClusterModel model;
  Assignment assignment;
  // Rows absorbed by filtered-out leaf entries; filled only when the tree
  // tracks points.
  std::vector<std::int64_t> outlier_rows;
};

/// Single-scan pipeline: build_tree, filter_outliers, global_cluster,
/// assign_points. Throws DegenerateClustering when the filter removes
/// every entry.
FitResult fit_predict(const FeatureMatrix& matrix, const BirchConfig& config);

/// One `cluster,<index>,n=<n>,radius=<r>,centroid=<v;...>` line per
/// cluster, then the same for outlier entries under `outlier`.
std::string model_report(const ClusterModel& model);

}  // namespace walkbirch
