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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "walkbirch/activity.hpp"
#include "walkbirch/types.hpp"

namespace walkbirch {

/// One (learner, activity) click total inside one subset. Files named
/// after a subset ("S2-1.csv") stamp their records with that key;
/// synthetic files carry none.
struct InteractionRecord {
  std::string learner_id;
  std::optional<SubsetKey> subset;
  ActivityKind activity = ActivityKind::Dataplus;
  double clicks = 0;
};

/// Learner-by-activity click matrix for one subset. Rows follow learner
/// first-appearance order; columns follow `feature_names`.
struct FeatureMatrix {
  std::optional<SubsetKey> subset;
  std::vector<ActivityKind> feature_names;
  std::vector<std::string> learner_ids;
  Matrix rows;
  std::optional<std::vector<int>> labels;  // ground truth, synthetic only

  Index row_count() const { return rows.rows(); }
  Index feature_count() const { return rows.cols(); }
};

/// Column mapping for CSV ingestion. With `activity_columns` empty, every
/// header column other than the learner / label columns must be a catalog
/// activity.
struct CsvSchema {
  std::string learner_column = "learner_id";
  std::string label_column = "label";
  std::vector<std::string> activity_columns;
};

/// Reads interaction records from a header-first CSV. Zero-click cells
/// produce no record. Malformed input aborts with a positional error
/// (MissingColumn, ParseError, UnknownActivity); nothing is skipped
/// silently.
std::vector<InteractionRecord> load_records(const std::filesystem::path& path,
                                            const CsvSchema& schema = {});

/// Buckets records by subset key. Every record lands in exactly one
/// bucket; a record without a key is a caller error (MissingSubsetKey).
std::map<SubsetKey, std::vector<InteractionRecord>> partition(
    std::span<const InteractionRecord> records);

/// Learner x activity click totals for one subset's records. Feature
/// columns are the observed activities in catalog order. Throws
/// EmptySubset on empty input.
FeatureMatrix pivot(std::span<const InteractionRecord> records);

/// Per-feature min-max scaling to [0, 1]; constant columns map to 0.
/// Idempotent; preserves names, ids and labels.
FeatureMatrix normalize(const FeatureMatrix& matrix);

struct SyntheticSpec {
  int cluster_count = 4;
  int informative_features = 8;
  int distractor_features = 0;
  int points_per_cluster = 100;
  double variance = 0.35;       // Gaussian variance of informative noise
  double outlier_fraction = 0;  // of all points, replaced uniformly
  std::uint64_t seed = 0;
  double span = 3.0;  // centroids sit on the all-equal line across [0, span]

  void validate() const;  // throws InvalidSpec
};

/// Labeled Gaussian blobs: cluster c's centroid has every informative
/// coordinate at span * c/(k-1); distractor features are uniform noise;
/// an outlier fraction is replaced by uniform box points with label -1.
/// Deterministic for a fixed seed.
FeatureMatrix generate_synthetic(const SyntheticSpec& spec);

/// Writes `learner_id,<activity>...[,label]` CSV with `\n` endings.
/// Integer cells print as integers, others as shortest round-trip
/// decimals.
void write_subset(const FeatureMatrix& matrix,
                  const std::filesystem::path& path);

/// Cell-level inverse of write_subset: preserves row order, zero cells and
/// the label column. Column order follows the file header.
FeatureMatrix read_matrix(const std::filesystem::path& path,
                          const CsvSchema& schema = {});

}  // namespace walkbirch
