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

#include "walkbirch/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "walkbirch/format.hpp"

namespace walkbirch {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
    fields.back().pop_back();
  return fields;
}

double parse_cell(const std::string& cell, std::size_t row,
                  const std::string& column) {
  double value = 0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    fail(Errc::ParseError, "row " + std::to_string(row) + ", column '" +
                               column + "': non-numeric cell '" + cell + "'");
  return value;
}

// Parsed header/grid shared by the record-level and matrix-level readers.
struct CsvTable {
  std::size_t learner_col = 0;
  std::optional<std::size_t> label_col;
  std::vector<std::pair<std::size_t, ActivityKind>> activity_cols;  // file order
  std::vector<std::string> learners;
  std::vector<std::vector<double>> cells;  // per row, activity_cols order
  std::vector<int> labels;
};

CsvTable read_table(const std::filesystem::path& path,
                    const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    fail(Errc::ParseError, path.string() + ": missing header row");
  std::vector<std::string> header = split_csv_line(line);

  CsvTable table;
  std::unordered_map<std::string, std::size_t> positions;
  for (std::size_t i = 0; i < header.size(); ++i) positions[header[i]] = i;

  auto learner_it = positions.find(schema.learner_column);
  if (learner_it == positions.end())
    fail(Errc::MissingColumn,
         "missing learner column '" + schema.learner_column + "'");
  table.learner_col = learner_it->second;
  if (auto label_it = positions.find(schema.label_column);
      label_it != positions.end())
    table.label_col = label_it->second;

  if (schema.activity_columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i == table.learner_col || (table.label_col && i == *table.label_col))
        continue;
      auto kind = parse_activity(header[i]);
      if (!kind)
        fail(Errc::UnknownActivity,
             "header column '" + header[i] + "' is not a catalog activity");
      table.activity_cols.emplace_back(i, *kind);
    }
  } else {
    for (const std::string& name : schema.activity_columns) {
      auto it = positions.find(name);
      if (it == positions.end())
        fail(Errc::MissingColumn, "missing activity column '" + name + "'");
      auto kind = parse_activity(name);
      if (!kind)
        fail(Errc::UnknownActivity,
             "column '" + name + "' is not a catalog activity");
      table.activity_cols.emplace_back(it->second, *kind);
    }
  }

  std::size_t row_number = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      fail(Errc::ParseError,
           "row " + std::to_string(row_number) + ": expected " +
               std::to_string(header.size()) + " fields, got " +
               std::to_string(fields.size()));
    table.learners.push_back(fields[table.learner_col]);
    std::vector<double> row;
    row.reserve(table.activity_cols.size());
    for (auto [col, kind] : table.activity_cols) {
      double value = parse_cell(fields[col], row_number, std::string(
                                                             to_string(kind)));
      if (value < 0)
        fail(Errc::ParseError,
             "row " + std::to_string(row_number) + ", column '" +
                 std::string(to_string(kind)) + "': negative clicks");
      row.push_back(value);
    }
    table.cells.push_back(std::move(row));
    if (table.label_col) {
      const std::string& cell = fields[*table.label_col];
      table.labels.push_back(
          static_cast<int>(parse_cell(cell, row_number, schema.label_column)));
    }
  }
  return table;
}

}  // namespace

std::vector<InteractionRecord> load_records(const std::filesystem::path& path,
                                            const CsvSchema& schema) {
  CsvTable table = read_table(path, schema);
  std::optional<SubsetKey> subset = parse_subset_key(path.stem().string());

  std::vector<InteractionRecord> records;
  for (std::size_t r = 0; r < table.cells.size(); ++r) {
    for (std::size_t c = 0; c < table.activity_cols.size(); ++c) {
      if (table.cells[r][c] == 0.0) continue;
      records.push_back(InteractionRecord{table.learners[r], subset,
                                          table.activity_cols[c].second,
                                          table.cells[r][c]});
    }
  }
  return records;
}

std::map<SubsetKey, std::vector<InteractionRecord>> partition(
    std::span<const InteractionRecord> records) {
  std::map<SubsetKey, std::vector<InteractionRecord>> buckets;
  for (const InteractionRecord& record : records) {
    if (!record.subset)
      fail(Errc::MissingSubsetKey,
           "record for learner '" + record.learner_id + "' has no subset key");
    buckets[*record.subset].push_back(record);
  }
  return buckets;
}

FeatureMatrix pivot(std::span<const InteractionRecord> records) {
  if (records.empty()) fail(Errc::EmptySubset, "pivot of an empty subset");
  const std::optional<SubsetKey> subset = records.front().subset;
  for (const InteractionRecord& record : records)
    if (record.subset != subset)
      fail(Errc::InvalidConfig, "pivot: records span multiple subsets");

  FeatureMatrix out;
  out.subset = subset;

  std::unordered_map<std::string, Index> row_of;
  bool observed[kActivityCount] = {};
  for (const InteractionRecord& record : records) {
    if (!row_of.contains(record.learner_id)) {
      row_of[record.learner_id] = static_cast<Index>(out.learner_ids.size());
      out.learner_ids.push_back(record.learner_id);
    }
    observed[catalog_index(record.activity)] = true;
  }
  Index col_of[kActivityCount];
  for (ActivityKind kind : activity_catalog()) {
    int idx = catalog_index(kind);
    col_of[idx] = -1;
    if (observed[idx]) {
      col_of[idx] = static_cast<Index>(out.feature_names.size());
      out.feature_names.push_back(kind);
    }
  }

  out.rows = Matrix::Zero(static_cast<Index>(out.learner_ids.size()),
                          static_cast<Index>(out.feature_names.size()));
  for (const InteractionRecord& record : records)
    out.rows(row_of[record.learner_id],
             col_of[catalog_index(record.activity)]) += record.clicks;
  return out;
}

FeatureMatrix normalize(const FeatureMatrix& matrix) {
  if (matrix.row_count() < 1) fail(Errc::EmptyInput, "normalize: no rows");
  FeatureMatrix out = matrix;
  for (Index c = 0; c < out.rows.cols(); ++c) {
    double lo = out.rows.col(c).minCoeff();
    double hi = out.rows.col(c).maxCoeff();
    if (hi == lo)
      out.rows.col(c).setZero();
    else
      out.rows.col(c) = (out.rows.col(c).array() - lo) / (hi - lo);
  }
  return out;
}

void SyntheticSpec::validate() const {
  if (cluster_count < 1) fail(Errc::InvalidSpec, "cluster_count must be >= 1");
  if (informative_features < 1)
    fail(Errc::InvalidSpec, "informative_features must be >= 1");
  if (distractor_features < 0)
    fail(Errc::InvalidSpec, "distractor_features must be >= 0");
  if (informative_features + distractor_features > kActivityCount)
    fail(Errc::InvalidSpec, "total feature count exceeds the catalog");
  if (points_per_cluster < 1)
    fail(Errc::InvalidSpec, "points_per_cluster must be >= 1");
  if (!(variance > 0)) fail(Errc::InvalidSpec, "variance must be positive");
  if (outlier_fraction < 0 || outlier_fraction > 0.2)
    fail(Errc::InvalidSpec, "outlier_fraction must lie in [0, 0.2]");
  if (!(span > 0)) fail(Errc::InvalidSpec, "span must be positive");
}

FeatureMatrix generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const int d = spec.informative_features + spec.distractor_features;
  const Index total =
      static_cast<Index>(spec.cluster_count) * spec.points_per_cluster;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(spec.variance));
  std::uniform_real_distribution<double> box(0.0, spec.span);

  FeatureMatrix out;
  out.feature_names.assign(activity_catalog().begin(),
                           activity_catalog().begin() + d);
  out.rows = Matrix(total, d);
  std::vector<int> labels(static_cast<std::size_t>(total));

  Index row = 0;
  for (int c = 0; c < spec.cluster_count; ++c) {
    double center = spec.cluster_count == 1
                        ? spec.span / 2
                        : spec.span * c / (spec.cluster_count - 1);
    for (int p = 0; p < spec.points_per_cluster; ++p, ++row) {
      for (int j = 0; j < spec.informative_features; ++j)
        out.rows(row, j) = center + noise(rng);
      for (int j = spec.informative_features; j < d; ++j)
        out.rows(row, j) = box(rng);
      labels[static_cast<std::size_t>(row)] = c;
    }
  }

  const auto outlier_count =
      static_cast<Index>(std::llround(spec.outlier_fraction * total));
  if (outlier_count > 0) {
    Vector lo = out.rows.colwise().minCoeff();
    Vector hi = out.rows.colwise().maxCoeff();
    std::vector<Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(static_cast<std::size_t>(outlier_count));
    std::sort(order.begin(), order.end());
    for (Index idx : order) {
      for (int j = 0; j < d; ++j) {
        std::uniform_real_distribution<double> cell(lo[j], hi[j]);
        out.rows(idx, j) = cell(rng);
      }
      labels[static_cast<std::size_t>(idx)] = -1;
    }
  }

  int width = static_cast<int>(std::to_string(total).size());
  out.learner_ids.reserve(static_cast<std::size_t>(total));
  for (Index i = 0; i < total; ++i) {
    std::string id = std::to_string(i);
    out.learner_ids.push_back("p" + std::string(
                                        static_cast<std::size_t>(width) -
                                            id.size(),
                                        '0') +
                              id);
  }
  out.labels = std::move(labels);
  return out;
}

void write_subset(const FeatureMatrix& matrix,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());

  out << "learner_id";
  for (ActivityKind kind : matrix.feature_names) out << ',' << to_string(kind);
  if (matrix.labels) out << ",label";
  out << '\n';

  for (Index r = 0; r < matrix.row_count(); ++r) {
    out << matrix.learner_ids[static_cast<std::size_t>(r)];
    for (Index c = 0; c < matrix.feature_count(); ++c)
      out << ',' << format_number(matrix.rows(r, c));
    if (matrix.labels)
      out << ',' << (*matrix.labels)[static_cast<std::size_t>(r)];
    out << '\n';
  }
  out.flush();
  if (!out.good()) fail(Errc::IoError, "write failed for " + path.string());
}

FeatureMatrix read_matrix(const std::filesystem::path& path,
                          const CsvSchema& schema) {
  CsvTable table = read_table(path, schema);

  FeatureMatrix out;
  out.subset = parse_subset_key(path.stem().string());
  for (auto [col, kind] : table.activity_cols) out.feature_names.push_back(kind);
  out.learner_ids = std::move(table.learners);
  out.rows = Matrix(static_cast<Index>(table.cells.size()),
                    static_cast<Index>(out.feature_names.size()));
  for (std::size_t r = 0; r < table.cells.size(); ++r)
    for (std::size_t c = 0; c < table.cells[r].size(); ++c)
      out.rows(static_cast<Index>(r), static_cast<Index>(c)) =
          table.cells[r][c];
  if (table.label_col) out.labels = std::move(table.labels);
  return out;
}

}  // namespace walkbirch
