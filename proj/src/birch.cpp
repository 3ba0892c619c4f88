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

#include "walkbirch/birch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "walkbirch/format.hpp"

namespace walkbirch {

void BirchConfig::validate() const {
  tree.validate();
  if (outlier_min_points < 1)
    fail(Errc::InvalidConfig, "outlier_min_points must be >= 1");
  if (merge_distance.has_value() == cluster_count.has_value())
    fail(Errc::InvalidConfig,
         "exactly one of merge_distance / cluster_count must be set");
  if (merge_distance && !(*merge_distance > 0))
    fail(Errc::InvalidConfig, "merge_distance must be positive");
  if (cluster_count && *cluster_count < 1)
    fail(Errc::InvalidConfig, "cluster_count must be >= 1");
}

CfTree build_tree(const FeatureMatrix& matrix, const BirchConfig& config) {
  config.validate();
  if (matrix.row_count() < 1) fail(Errc::EmptyInput, "build_tree: no rows");

  TreeParams params = config.tree;
  params.dimension = matrix.feature_count();
  CfTree tree(params);
  for (Index r = 0; r < matrix.row_count(); ++r)
    tree.insert(matrix.rows.row(r).transpose());
  return tree;
}

std::pair<std::vector<ClusteringFeature>, std::vector<ClusteringFeature>>
filter_outliers(const CfTree& tree, const BirchConfig& config) {
  std::vector<ClusteringFeature> kept, outliers;
  for (const ClusteringFeature& cf : tree.leaf_entries())
    (cf.n < config.outlier_min_points ? outliers : kept).push_back(cf);
  return {std::move(kept), std::move(outliers)};
}

namespace {

// Agglomeration state: live clusters keep their creation index so tie
// breaks stay reproducible. A nearest-neighbor cache per live cluster
// avoids rescanning every pair per merge.
struct Agglomerator {
  std::vector<ClusteringFeature> cfs;
  std::vector<Vector> centroids;
  std::vector<bool> dead;
  std::vector<std::size_t> nn;
  std::vector<double> nn_dist;
  std::size_t live = 0;

  explicit Agglomerator(std::span<const ClusteringFeature> entries) {
    for (const ClusteringFeature& cf : entries) {
      cfs.push_back(cf);
      centroids.push_back(cf_centroid(cf));
    }
    live = cfs.size();
    dead.assign(live, false);
    nn.assign(live, 0);
    nn_dist.assign(live, 0);
    for (std::size_t i = 0; i < cfs.size(); ++i) rescan(i);
  }

  // Exact argmin over live peers, lowest index on ties.
  void rescan(std::size_t i) {
    nn[i] = cfs.size();
    nn_dist[i] = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cfs.size(); ++j) {
      if (j == i || dead[j]) continue;
      double dist = (centroids[i] - centroids[j]).norm();
      if (dist < nn_dist[i]) {
        nn_dist[i] = dist;
        nn[i] = j;
      }
    }
  }

  // Closest live pair as (distance, i, j) with i < j, lexicographic
  // smallest pair among equal distances.
  bool closest(double& dist, std::size_t& a, std::size_t& b) const {
    if (live < 2) return false;
    dist = std::numeric_limits<double>::infinity();
    a = b = cfs.size();
    for (std::size_t i = 0; i < cfs.size(); ++i) {
      if (dead[i] || nn[i] == cfs.size()) continue;
      std::size_t lo = std::min(i, nn[i]);
      std::size_t hi = std::max(i, nn[i]);
      if (nn_dist[i] < dist ||
          (nn_dist[i] == dist && (lo < a || (lo == a && hi < b)))) {
        dist = nn_dist[i];
        a = lo;
        b = hi;
      }
    }
    return a != cfs.size();
  }

  void merge(std::size_t a, std::size_t b) {
    cfs[a] = cf_merge(cfs[a], cfs[b]);
    centroids[a] = cf_centroid(cfs[a]);
    dead[b] = true;
    --live;
    rescan(a);
    for (std::size_t i = 0; i < cfs.size(); ++i) {
      if (dead[i] || i == a) continue;
      if (nn[i] == a || nn[i] == b) {
        rescan(i);
        continue;
      }
      double dist = (centroids[i] - centroids[a]).norm();
      if (dist < nn_dist[i] || (dist == nn_dist[i] && a < nn[i])) {
        nn_dist[i] = dist;
        nn[i] = a;
      }
    }
  }
};

}  // namespace

ClusterModel global_cluster(std::span<const ClusteringFeature> entries,
                            const BirchConfig& config) {
  config.validate();
  if (entries.empty()) fail(Errc::NoEntries, "global_cluster: no entries");

  Agglomerator state(entries);
  const std::size_t target =
      config.cluster_count ? static_cast<std::size_t>(*config.cluster_count)
                           : 1;

  ClusterModel model;
  model.config = config;
  while (state.live > (config.cluster_count ? target : std::size_t{1})) {
    double dist;
    std::size_t a, b;
    if (!state.closest(dist, a, b)) break;
    if (config.merge_distance && dist > *config.merge_distance) break;
    state.merge(a, b);
    model.merge_trace.push_back(dist);
  }
  for (std::size_t i = 0; i < state.cfs.size(); ++i) {
    if (state.dead[i]) continue;
    model.cluster_cfs.push_back(state.cfs[i]);
    model.centroids.push_back(state.centroids[i]);
  }
  return model;
}

Assignment assign_points(const FeatureMatrix& matrix,
                         const ClusterModel& model) {
  if (model.centroids.empty())
    fail(Errc::NoEntries, "assign_points: model has no clusters");
  if (model.centroids.front().size() != matrix.feature_count())
    fail(Errc::DimensionMismatch,
         "assign_points: matrix and model dimensions differ");

  Assignment out;
  out.labels.resize(static_cast<std::size_t>(matrix.row_count()));
  for (Index r = 0; r < matrix.row_count(); ++r) {
    int best = 0;
    double best_dist =
        (matrix.rows.row(r).transpose() - model.centroids[0]).norm();
    for (std::size_t k = 1; k < model.centroids.size(); ++k) {
      double dist =
          (matrix.rows.row(r).transpose() - model.centroids[k]).norm();
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(k);
      }
    }
    out.labels[static_cast<std::size_t>(r)] = best;
  }
  return out;
}

FitResult fit_predict(const FeatureMatrix& matrix, const BirchConfig& config) {
  CfTree tree = build_tree(matrix, config);

  FitResult result;
  std::vector<ClusteringFeature> kept;
  if (config.tree.track_points) {
    // Walk entry refs so filtered rows can be reported.
    for (const CfEntry* entry : tree.leaf_entry_refs()) {
      if (entry->cf.n < config.outlier_min_points) {
        result.model.outlier_cfs.push_back(entry->cf);
        result.outlier_rows.insert(result.outlier_rows.end(),
                                   entry->points.begin(), entry->points.end());
      } else {
        kept.push_back(entry->cf);
      }
    }
    std::sort(result.outlier_rows.begin(), result.outlier_rows.end());
  } else {
    auto [k, o] = filter_outliers(tree, config);
    kept = std::move(k);
    result.model.outlier_cfs = std::move(o);
  }
  if (kept.empty())
    fail(Errc::DegenerateClustering,
         "every leaf entry fell below the outlier threshold");

  auto outlier_cfs = std::move(result.model.outlier_cfs);
  result.model = global_cluster(kept, config);
  result.model.outlier_cfs = std::move(outlier_cfs);
  result.assignment = assign_points(matrix, result.model);
  return result;
}

std::string model_report(const ClusterModel& model) {
  std::string out = "kind,index,n,radius,centroid\n";
  auto emit = [&out](const char* kind, std::size_t index,
                     const ClusteringFeature& cf) {
    out += kind;
    out += ',';
    out += std::to_string(index);
    out += ',';
    out += std::to_string(cf.n);
    out += ',';
    out += format_number(cf_radius(cf));
    out += ',';
    Vector c = cf_centroid(cf);
    for (Index i = 0; i < c.size(); ++i) {
      if (i > 0) out += ';';
      out += format_number(c[i]);
    }
    out += '\n';
  };
  for (std::size_t i = 0; i < model.cluster_cfs.size(); ++i)
    emit("cluster", i, model.cluster_cfs[i]);
  for (std::size_t i = 0; i < model.outlier_cfs.size(); ++i)
    emit("outlier", i, model.outlier_cfs[i]);
  return out;
}

}  // namespace walkbirch
