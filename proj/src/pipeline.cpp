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

#include "walkbirch/pipeline.hpp"

#include <atomic>
#include <thread>

#include "walkbirch/format.hpp"

namespace walkbirch {

std::string_view to_string(Variant variant) {
  return variant == Variant::Baseline ? "baseline" : "improved";
}

namespace {

void attach_scores(RunResult& result, const FeatureMatrix& matrix) {
  if (!matrix.labels) return;
  PairConfusion confusion =
      pair_confusion(*matrix.labels, result.assignment.labels);
  if (confusion.total() > 0) result.scores = score_bundle(confusion);
}

// Distinct per-subset walk seed; splitmix64 of the base seed and slot.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t slot) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (slot + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RunResult run_baseline(const std::string& id, const FeatureMatrix& matrix,
                       const BirchConfig& config) {
  RunResult result;
  result.id = id;
  result.variant = Variant::Baseline;
  auto [fit, seconds] = benchmark([&] { return fit_predict(matrix, config); });
  result.model = std::move(fit.model);
  result.assignment = std::move(fit.assignment);
  result.outlier_rows = std::move(fit.outlier_rows);
  result.wall_time_s = seconds;
  attach_scores(result, matrix);
  return result;
}

RunResult run_improved(const std::string& id, const FeatureMatrix& matrix,
                       const BirchConfig& birch_config,
                       const WalkConfig& walk_config, double top_fraction) {
  RunResult result;
  result.id = id;
  result.variant = Variant::Improved;
  auto [fit, seconds] = benchmark([&] {
    KeyPath path = extract_key_path(matrix, walk_config, top_fraction);
    FeatureMatrix projected = project_features(matrix, path);
    FitResult inner = fit_predict(projected, birch_config);
    return std::pair<KeyPath, FitResult>{std::move(path), std::move(inner)};
  });
  result.key_path = std::move(fit.first);
  result.model = std::move(fit.second.model);
  result.assignment = std::move(fit.second.assignment);
  result.outlier_rows = std::move(fit.second.outlier_rows);
  result.wall_time_s = seconds;
  attach_scores(result, matrix);
  return result;
}

Comparison compare(
    std::span<const std::pair<std::string, FeatureMatrix>> matrices,
    const CompareConfig& config) {
  if (matrices.empty()) fail(Errc::EmptyInput, "compare: no matrices");

  Comparison comparison;
  comparison.rows.resize(matrices.size());

  auto run_one = [&](std::size_t i) {
    const auto& [id, matrix] = matrices[i];
    SubsetOutcome& row = comparison.rows[i];
    row.id = id;
    try {
      WalkConfig walk = config.walk;
      walk.seed = derive_seed(config.walk.seed, i);
      row.baseline = run_baseline(id, matrix, config.birch);
      row.improved =
          run_improved(id, matrix, config.birch, walk, config.top_fraction);
      if (row.baseline->scores && row.improved->scores) {
        const ScoreBundle& b = *row.baseline->scores;
        const ScoreBundle& m = *row.improved->scores;
        row.score_delta = ScoreBundle{m.precise - b.precise,
                                      m.accuracy - b.accuracy,
                                      m.recall - b.recall,
                                      m.f_score - b.f_score};
      }
      if (row.baseline->wall_time_s > 0)
        row.time_ratio = row.improved->wall_time_s / row.baseline->wall_time_s;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.baseline.reset();
      row.improved.reset();
    }
  };

  int workers = std::max(1, config.workers);
  if (workers == 1 || matrices.size() == 1) {
    for (std::size_t i = 0; i < matrices.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
      for (std::size_t i = cursor.fetch_add(1); i < matrices.size();
           i = cursor.fetch_add(1))
        run_one(i);
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(workers, static_cast<int>(matrices.size()));
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return comparison;
}

std::string comparison_csv(const Comparison& comparison) {
  std::string out =
      "id,variant,clusters,precise,accuracy,recall,f_score,time_s,key_path\n";
  auto emit = [&out](const std::string& id, const RunResult& run) {
    out += id;
    out += ',';
    out += to_string(run.variant);
    out += ',';
    out += std::to_string(run.model.cluster_count());
    for (double score : {run.scores ? run.scores->precise : -1.0,
                         run.scores ? run.scores->accuracy : -1.0,
                         run.scores ? run.scores->recall : -1.0,
                         run.scores ? run.scores->f_score : -1.0}) {
      out += ',';
      if (score >= 0) out += format_number(score);
    }
    out += ',';
    out += format_fixed(run.wall_time_s, 6);
    out += ',';
    if (run.key_path) {
      for (std::size_t i = 0; i < run.key_path->activities.size(); ++i) {
        if (i > 0) out += ' ';
        out += to_string(run.key_path->activities[i]);
      }
    }
    out += '\n';
  };
  for (const SubsetOutcome& row : comparison.rows) {
    if (!row.ok()) {
      std::string reason = row.error;
      for (char& ch : reason)
        if (ch == ',' || ch == '\n') ch = ';';
      out += row.id + ",failed,,,,,,," + reason + "\n";
      continue;
    }
    emit(row.id, *row.baseline);
    emit(row.id, *row.improved);
  }
  return out;
}

}  // namespace walkbirch
