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

#include "walkbirch/cf_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_set>

namespace walkbirch {

ClusteringFeature cf_zero(Index d) {
  return ClusteringFeature{0, Vector::Zero(d), Vector::Zero(d)};
}

ClusteringFeature cf_from_point(const Vector& x) {
  if (!x.allFinite()) fail(Errc::NonFiniteInput, "non-finite point coordinate");
  return ClusteringFeature{1, x, x.cwiseProduct(x)};
}

ClusteringFeature cf_merge(const ClusteringFeature& a,
                           const ClusteringFeature& b) {
  if (a.dimension() != b.dimension())
    fail(Errc::DimensionMismatch, "cf_merge: dimensions differ");
  return ClusteringFeature{a.n + b.n, a.ls + b.ls, a.ss + b.ss};
}

Vector cf_centroid(const ClusteringFeature& cf) {
  if (cf.n == 0) fail(Errc::EmptyCf, "cf_centroid of empty summary");
  return cf.ls / static_cast<double>(cf.n);
}

double cf_radius(const ClusteringFeature& cf) {
  if (cf.n == 0) fail(Errc::EmptyCf, "cf_radius of empty summary");
  double inv_n = 1.0 / static_cast<double>(cf.n);
  double mean_sq = cf.ss.sum() * inv_n;
  double centroid_sq = (cf.ls * inv_n).squaredNorm();
  return std::sqrt(std::max(0.0, mean_sq - centroid_sq));
}

double cf_distance(const ClusteringFeature& a, const ClusteringFeature& b) {
  if (a.n == 0 || b.n == 0) fail(Errc::EmptyCf, "cf_distance of empty summary");
  if (a.dimension() != b.dimension())
    fail(Errc::DimensionMismatch, "cf_distance: dimensions differ");
  return (a.ls / static_cast<double>(a.n) - b.ls / static_cast<double>(b.n))
      .norm();
}

void TreeParams::validate() const {
  if (!(radius_threshold > 0))
    fail(Errc::InvalidConfig, "radius threshold must be positive");
  if (branching < 2) fail(Errc::InvalidConfig, "branching factor must be >= 2");
  if (leaf_capacity < 1) fail(Errc::InvalidConfig, "leaf capacity must be >= 1");
  if (dimension < 0) fail(Errc::InvalidConfig, "dimension must be >= 0");
}

namespace {

// Sum of a node's entry summaries; exact recomputation used wherever a
// subtree was restructured.
ClusteringFeature node_cf(const CfNode& node, Index d) {
  ClusteringFeature sum = cf_zero(d);
  for (const CfEntry& e : node.entries) sum = cf_merge(sum, e.cf);
  return sum;
}

// Index of the entry whose centroid is nearest to `target`; ties resolve
// to the lowest index.
std::size_t nearest_entry(const std::vector<CfEntry>& entries,
                          const ClusteringFeature& target) {
  std::size_t best = 0;
  double best_dist = cf_distance(entries[0].cf, target);
  for (std::size_t i = 1; i < entries.size(); ++i) {
    double dist = cf_distance(entries[i].cf, target);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::pair<CfNode, CfNode> split_node(CfNode node) {
  const std::size_t m = node.entries.size();
  if (m < 2) fail(Errc::Underfull, "split of a node with fewer than 2 entries");

  std::vector<Vector> centroids;
  centroids.reserve(m);
  for (const CfEntry& e : node.entries) centroids.push_back(cf_centroid(e.cf));

  // Farthest pair seeds the halves; first pair encountered wins ties.
  std::size_t seed_a = 0, seed_b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double dist = (centroids[i] - centroids[j]).norm();
      if (dist > best) {
        best = dist;
        seed_a = i;
        seed_b = j;
      }
    }
  }

  CfNode left, right;
  left.leaf = right.leaf = node.leaf;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == seed_a) {
      left.entries.push_back(std::move(node.entries[i]));
    } else if (i == seed_b) {
      right.entries.push_back(std::move(node.entries[i]));
    } else {
      double to_a = (centroids[i] - centroids[seed_a]).norm();
      double to_b = (centroids[i] - centroids[seed_b]).norm();
      (to_a <= to_b ? left : right).entries.push_back(std::move(node.entries[i]));
    }
  }
  return {std::move(left), std::move(right)};
}

MergeOutcome merge_refinement(CfNode& parent, const TreeParams& params,
                              std::pair<std::size_t, std::size_t> fresh) {
  const std::size_t m = parent.entries.size();
  auto normalized = std::minmax(fresh.first, fresh.second);

  std::size_t best_i = m, best_j = m;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (i == normalized.first && j == normalized.second) continue;
      double dist = cf_distance(parent.entries[i].cf, parent.entries[j].cf);
      if (dist < best_dist) {
        best_dist = dist;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (best_i == m) return {};

  CfEntry& keep = parent.entries[best_i];
  CfEntry& drop = parent.entries[best_j];
  ClusteringFeature combined = cf_merge(keep.cf, drop.cf);
  if (cf_radius(combined) > params.radius_threshold) return {};

  MergeOutcome outcome;
  if (keep.has_child()) {
    std::size_t joined = keep.child->entries.size() + drop.child->entries.size();
    std::size_t cap = keep.child->leaf
                          ? static_cast<std::size_t>(params.leaf_capacity)
                          : static_cast<std::size_t>(params.branching);
    if (joined > cap) return {};
    for (CfEntry& e : drop.child->entries)
      keep.child->entries.push_back(std::move(e));
    drop.child->entries.clear();
    outcome.absorbed = std::move(drop.child);
  }
  keep.cf = combined;
  keep.points.insert(keep.points.end(), drop.points.begin(), drop.points.end());
  parent.entries.erase(parent.entries.begin() +
                       static_cast<std::ptrdiff_t>(best_j));
  outcome.merged = true;
  return outcome;
}

CfTree::CfTree(TreeParams params) : params_(params) {
  params_.validate();
  if (params_.dimension < 1)
    fail(Errc::InvalidConfig, "tree dimension must be >= 1");
  root_ = std::make_unique<CfNode>();
  root_->leaf = true;
  leaf_head_ = root_.get();
}

void CfTree::link_after(CfNode* existing, CfNode* fresh) {
  fresh->prev = existing;
  fresh->next = existing->next;
  if (existing->next != nullptr) existing->next->prev = fresh;
  existing->next = fresh;
}

void unlink_leaf(CfNode& leaf, CfNode*& head) {
  if (head == &leaf) head = leaf.next;
  if (leaf.prev != nullptr) leaf.prev->next = leaf.next;
  if (leaf.next != nullptr) leaf.next->prev = leaf.prev;
  leaf.prev = nullptr;
  leaf.next = nullptr;
}

void CfTree::apply_refinement(CfNode& parent, std::size_t fresh_left,
                              std::size_t fresh_right) {
  MergeOutcome outcome =
      merge_refinement(parent, params_, {fresh_left, fresh_right});
  if (outcome.merged && outcome.absorbed != nullptr && outcome.absorbed->leaf)
    unlink_leaf(*outcome.absorbed, leaf_head_);
}

CfTree::InsertOutcome CfTree::insert_recursive(CfNode& node,
                                               const ClusteringFeature& point,
                                               std::int64_t point_id) {
  if (node.leaf) {
    bool absorbed = false;
    if (!node.entries.empty()) {
      std::size_t closest = nearest_entry(node.entries, point);
      ClusteringFeature grown = cf_merge(node.entries[closest].cf, point);
      if (cf_radius(grown) <= params_.radius_threshold) {
        node.entries[closest].cf = std::move(grown);
        if (params_.track_points)
          node.entries[closest].points.push_back(point_id);
        absorbed = true;
      }
    }
    if (!absorbed) {
      CfEntry entry;
      entry.cf = point;
      if (params_.track_points) entry.points.push_back(point_id);
      node.entries.push_back(std::move(entry));
    }
    if (node.entries.size() <= static_cast<std::size_t>(params_.leaf_capacity))
      return {};
  } else {
    std::size_t slot = nearest_entry(node.entries, point);
    InsertOutcome below = insert_recursive(*node.entries[slot].child, point,
                                           point_id);
    if (!below.split) {
      node.entries[slot].cf = cf_merge(node.entries[slot].cf, point);
      return {};
    }
    // The child was rebuilt in place as the left half; refresh its summary
    // and install the right half next to it.
    node.entries[slot].cf = node_cf(*node.entries[slot].child,
                                    params_.dimension);
    CfEntry fresh;
    fresh.cf = std::move(below.right_cf);
    fresh.child = std::move(below.right);
    node.entries.insert(node.entries.begin() +
                            static_cast<std::ptrdiff_t>(slot) + 1,
                        std::move(fresh));
    if (node.entries.size() <= static_cast<std::size_t>(params_.branching)) {
      apply_refinement(node, slot, slot + 1);
      return {};
    }
  }

  // Overflow: rebuild this node as the left half, hand the right half up.
  CfNode* prev = node.prev;
  CfNode* next = node.next;
  auto [left, right] = split_node(std::move(node));
  node = std::move(left);
  node.prev = prev;
  node.next = next;

  InsertOutcome outcome;
  outcome.split = true;
  outcome.right = std::make_unique<CfNode>(std::move(right));
  outcome.right_cf = node_cf(*outcome.right, params_.dimension);
  if (node.leaf) link_after(&node, outcome.right.get());
  return outcome;
}

void CfTree::insert(const Vector& x) {
  if (x.size() != params_.dimension)
    fail(Errc::DimensionMismatch, "insert: point dimension mismatch");
  ClusteringFeature point = cf_from_point(x);

  InsertOutcome top = insert_recursive(*root_, point, point_total_);
  if (top.split) {
    auto fresh_root = std::make_unique<CfNode>();
    fresh_root->leaf = false;
    CfEntry left_entry;
    left_entry.cf = node_cf(*root_, params_.dimension);
    left_entry.child = std::move(root_);
    CfEntry right_entry;
    right_entry.cf = std::move(top.right_cf);
    right_entry.child = std::move(top.right);
    fresh_root->entries.push_back(std::move(left_entry));
    fresh_root->entries.push_back(std::move(right_entry));
    root_ = std::move(fresh_root);
  }
  ++point_total_;
}

std::vector<ClusteringFeature> CfTree::leaf_entries() const {
  std::vector<ClusteringFeature> out;
  for (const CfNode* leaf = leaf_head_; leaf != nullptr; leaf = leaf->next)
    for (const CfEntry& e : leaf->entries) out.push_back(e.cf);
  return out;
}

std::vector<const CfEntry*> CfTree::leaf_entry_refs() const {
  std::vector<const CfEntry*> out;
  for (const CfNode* leaf = leaf_head_; leaf != nullptr; leaf = leaf->next)
    for (const CfEntry& e : leaf->entries) out.push_back(&e);
  return out;
}

ClusteringFeature CfTree::root_cf() const {
  return node_cf(*root_, params_.dimension);
}

namespace {

void dump_node(const CfNode& node, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out += pad;
  out += node.leaf ? "leaf\n" : "internal\n";
  char line[512];
  for (const CfEntry& e : node.entries) {
    Vector c = cf_centroid(e.cf);
    out += pad;
    std::snprintf(line, sizeof(line), "- n=%lld radius=%.6f centroid=[",
                  static_cast<long long>(e.cf.n), cf_radius(e.cf));
    out += line;
    for (Index i = 0; i < c.size(); ++i) {
      std::snprintf(line, sizeof(line), i + 1 < c.size() ? "%.6f, " : "%.6f",
                    c[i]);
      out += line;
    }
    out += "]\n";
    if (e.has_child()) dump_node(*e.child, depth + 1, out);
  }
}

void require(bool condition, const std::string& what) {
  if (!condition) fail(Errc::InvalidConfig, "tree invariant violated: " + what);
}

bool cf_close(const ClusteringFeature& a, const ClusteringFeature& b,
              double rel) {
  if (a.n != b.n || a.dimension() != b.dimension()) return false;
  for (Index i = 0; i < a.dimension(); ++i) {
    double scale = 1.0 + std::max(std::abs(a.ls[i]), std::abs(b.ls[i]));
    if (std::abs(a.ls[i] - b.ls[i]) > rel * scale) return false;
    scale = 1.0 + std::max(std::abs(a.ss[i]), std::abs(b.ss[i]));
    if (std::abs(a.ss[i] - b.ss[i]) > rel * scale) return false;
  }
  return true;
}

}  // namespace

std::string CfTree::dump() const {
  std::string out;
  dump_node(*root_, 0, out);
  return out;
}

void CfTree::check_invariants() const {
  constexpr double kRel = 1e-9;
  std::vector<const CfNode*> leaves_in_tree_order;
  int leaf_depth = -1;

  // Structural walk: capacities, parent sums, uniform leaf depth.
  auto walk = [&](auto&& self, const CfNode& node, int depth) -> void {
    if (node.leaf) {
      require(node.entries.size() <=
                  static_cast<std::size_t>(params_.leaf_capacity),
              "leaf capacity");
      for (const CfEntry& e : node.entries) {
        require(!e.has_child(), "leaf entry with child");
        require(e.cf.n >= 1, "empty leaf entry");
        require(cf_radius(e.cf) <= params_.radius_threshold + 1e-12,
                "leaf entry radius above threshold");
        if (params_.track_points)
          require(static_cast<std::int64_t>(e.points.size()) == e.cf.n,
                  "tracked point count");
      }
      if (leaf_depth < 0) leaf_depth = depth;
      require(depth == leaf_depth, "unequal leaf depth");
      leaves_in_tree_order.push_back(&node);
      return;
    }
    require(node.entries.size() <= static_cast<std::size_t>(params_.branching),
            "branching capacity");
    require(!node.entries.empty(), "empty internal node");
    for (const CfEntry& e : node.entries) {
      require(e.has_child(), "internal entry without child");
      require(cf_close(e.cf, node_cf(*e.child, params_.dimension), kRel),
              "parent summary out of sync with child");
      self(self, *e.child, depth + 1);
    }
  };
  walk(walk, *root_, 0);

  // Chain walk: acyclic, mutually linked, covers exactly the tree's leaves.
  std::unordered_set<const CfNode*> seen;
  std::vector<const CfNode*> chain;
  for (const CfNode* leaf = leaf_head_; leaf != nullptr; leaf = leaf->next) {
    require(seen.insert(leaf).second, "cycle in leaf chain");
    if (leaf->prev != nullptr)
      require(leaf->prev->next == leaf, "broken prev link");
    if (leaf->next != nullptr)
      require(leaf->next->prev == leaf, "broken next link");
    chain.push_back(leaf);
  }
  require(leaf_head_ == nullptr || leaf_head_->prev == nullptr,
          "chain head has a predecessor");
  require(chain.size() == leaves_in_tree_order.size(),
          "chain length != leaf count");
  for (const CfNode* leaf : leaves_in_tree_order)
    require(seen.count(leaf) == 1, "leaf missing from chain");

  // Point conservation.
  std::int64_t total = 0;
  for (const CfNode* leaf : chain)
    for (const CfEntry& e : leaf->entries) total += e.cf.n;
  require(total == point_total_, "leaf point total != inserted count");
}

}  // namespace walkbirch
