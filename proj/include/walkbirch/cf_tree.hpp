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
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "walkbirch/types.hpp"

namespace walkbirch {

/// Additive summary of a point set: count, per-dimension sum and
/// per-dimension sum of squares. Sums of two summaries describe the union
/// of the underlying sets exactly.
struct ClusteringFeature {
  std::int64_t n = 0;
  Vector ls;
  Vector ss;

  Index dimension() const { return ls.size(); }
};

/// Empty summary of dimension `d` (n = 0, zero vectors).
ClusteringFeature cf_zero(Index d);

/// Summary of the singleton {x}. Throws NonFiniteInput on NaN/inf
/// coordinates.
ClusteringFeature cf_from_point(const Vector& x);

/// Componentwise sum. Throws DimensionMismatch.
ClusteringFeature cf_merge(const ClusteringFeature& a,
                           const ClusteringFeature& b);

/// Mean of the summarized points, ls / n. Throws EmptyCf when n = 0.
Vector cf_centroid(const ClusteringFeature& cf);

/// RMS distance of the summarized points to their centroid:
/// sqrt(sum(ss)/n - |ls/n|^2), clamped at 0 against floating-point
/// negativity. Throws EmptyCf when n = 0.
double cf_radius(const ClusteringFeature& cf);

/// Euclidean distance between the two centroids. Throws EmptyCf /
/// DimensionMismatch.
double cf_distance(const ClusteringFeature& a, const ClusteringFeature& b);

struct TreeParams {
  double radius_threshold = 0.5;  // T: max leaf-entry radius
  int branching = 8;              // B: max entries per internal node
  int leaf_capacity = 8;          // L: max entries per leaf
  Index dimension = 0;  // d: fixed per tree; 0 = resolved from the data
  bool track_points = false;      // record point ids per leaf entry

  void validate() const;  // throws InvalidConfig
};

struct CfNode;

struct CfEntry {
  ClusteringFeature cf;
  std::unique_ptr<CfNode> child;       // null in leaf entries
  std::vector<std::int64_t> points;    // only filled when tracking

  bool has_child() const { return child != nullptr; }
};

struct CfNode {
  bool leaf = true;
  std::vector<CfEntry> entries;
  // Doubly linked chain over leaves; null elsewhere.
  CfNode* prev = nullptr;
  CfNode* next = nullptr;
};

/// Splits an over-capacity node: the two entries at maximal pairwise
/// centroid distance seed the halves, every other entry joins the closer
/// seed (ties to the first seed). Children move with their entries; leaf
/// chain links are the caller's job. Throws Underfull on < 2 entries.
std::pair<CfNode, CfNode> split_node(CfNode node);

struct MergeOutcome {
  bool merged = false;
  // The child node absorbed into its sibling, still chain-linked;
  // the caller unhooks it from the leaf chain before dropping it.
  std::unique_ptr<CfNode> absorbed;
};

/// Post-split refinement: among `parent`'s entries, merges the closest
/// pair other than `fresh` when the combined summary still fits the radius
/// threshold (and, for entries with children, the combined child fits its
/// capacity). No-op otherwise.
MergeOutcome merge_refinement(CfNode& parent, const TreeParams& params,
                              std::pair<std::size_t, std::size_t> fresh);

/// Removes a leaf from the doubly linked chain, fixing `head` when the
/// removed leaf is the entry point. The leaf's own links are cleared.
void unlink_leaf(CfNode& leaf, CfNode*& head);

/// Height-balanced tree of clustering features with threshold-driven
/// insertion. Single-writer; safe for concurrent reads once built.
class CfTree {
 public:
  explicit CfTree(TreeParams params);

  CfTree(CfTree&&) noexcept = default;
  CfTree& operator=(CfTree&&) noexcept = default;

  /// Inserts one point: descends by nearest centroid, absorbs into the
  /// closest leaf entry when the grown radius stays within threshold,
  /// otherwise adds an entry and splits upward on overflow.
  void insert(const Vector& x);

  /// Leaf-entry summaries in chain order.
  std::vector<ClusteringFeature> leaf_entries() const;

  /// Leaf entries in chain order, with tracked point ids when enabled.
  std::vector<const CfEntry*> leaf_entry_refs() const;

  /// Aggregate of all root entries; equals the summary of every inserted
  /// point up to floating-point drift.
  ClusteringFeature root_cf() const;

  const TreeParams& params() const { return params_; }
  std::int64_t point_total() const { return point_total_; }
  const CfNode& root() const { return *root_; }
  const CfNode* leaf_head() const { return leaf_head_; }

  /// Deterministic indented rendering (node kind, per-entry n / centroid /
  /// radius) for golden-file comparisons.
  std::string dump() const;

  /// Walks the whole structure and throws Error on any violated structural
  /// invariant (capacities, leaf radii, parent sums, uniform depth, chain
  /// integrity, point conservation). Test hook.
  void check_invariants() const;

 private:
  struct InsertOutcome {
    bool split = false;
    ClusteringFeature right_cf;
    std::unique_ptr<CfNode> right;
  };

  InsertOutcome insert_recursive(CfNode& node, const ClusteringFeature& point,
                                 std::int64_t point_id);
  void link_after(CfNode* existing, CfNode* fresh);
  void apply_refinement(CfNode& parent, std::size_t fresh_left,
                        std::size_t fresh_right);

  TreeParams params_;
  std::unique_ptr<CfNode> root_;
  CfNode* leaf_head_ = nullptr;
  std::int64_t point_total_ = 0;
};

}  // namespace walkbirch
