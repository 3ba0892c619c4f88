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

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "walkbirch/birch.hpp"
#include "walkbirch/dataset.hpp"
#include "walkbirch/format.hpp"
#include "walkbirch/pipeline.hpp"
#include "walkbirch/random_walk.hpp"
#include "walkbirch/svg.hpp"
#include "walkbirch/types.hpp"

namespace fs = std::filesystem;
using namespace walkbirch;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Shape of one benchmark subset: label plus feature/row scale.
struct SubsetShape {
  const char* label;
  int features;
  int rows;
};

// The 22 (course, period) cells of the benchmark layout, with each cell's
// feature count and row scale.
constexpr SubsetShape kPaperShape[] = {
    {"S1-2", 4, 378},   {"S1-4", 4, 357},   {"S2-1", 10, 1527},
    {"S2-2", 10, 1870}, {"S2-3", 10, 1294}, {"S2-4", 10, 1921},
    {"S3-3", 9, 1681},  {"S3-4", 9, 2302},  {"S4-2", 7, 895},
    {"S4-3", 7, 773},   {"S4-4", 7, 698},   {"T1-1", 11, 1214},
    {"T1-2", 10, 1768}, {"T1-3", 10, 1116}, {"T1-4", 10, 1647},
    {"T2-2", 11, 964},  {"T2-3", 11, 624},  {"T2-4", 11, 1097},
    {"T3-1", 14, 1510}, {"T3-2", 16, 2098}, {"T3-3", 15, 1563},
    {"T3-4", 16, 2121},
};

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t slot) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (slot + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << content;
  out.flush();
  if (!out.good()) fail(Errc::IoError, "write failed for " + path.string());
}

// The 22 benchmark subsets derived from `base`: per-cell seeds, feature
// counts split evenly between informative and distractor columns, cluster
// variance drawn from [0.3, 0.4]. Matrices come back normalized.
std::vector<std::pair<std::string, FeatureMatrix>> paper_shape_matrices(
    const SyntheticSpec& base) {
  std::vector<std::pair<std::string, FeatureMatrix>> out;
  out.reserve(std::size(kPaperShape));
  for (std::size_t i = 0; i < std::size(kPaperShape); ++i) {
    const SubsetShape& shape = kPaperShape[i];
    SyntheticSpec spec = base;
    spec.seed = mix_seed(base.seed, i);
    spec.informative_features = (shape.features + 1) / 2;
    spec.distractor_features = shape.features / 2;
    spec.points_per_cluster = std::max(
        1, (shape.rows + spec.cluster_count / 2) / spec.cluster_count);
    std::mt19937_64 rng(spec.seed);
    spec.variance = std::uniform_real_distribution<double>(0.3, 0.4)(rng);
    out.emplace_back(shape.label, normalize(generate_synthetic(spec)));
  }
  return out;
}

struct GenerateArgs {
  std::string out_dir;
  std::string id = "synthetic";
  SyntheticSpec spec;
  bool paper_shape = false;
};

int cmd_generate(const GenerateArgs& args) {
  fs::create_directories(args.out_dir);
  auto emit = [&](const std::string& id, const FeatureMatrix& matrix) {
    fs::path path = fs::path(args.out_dir) / (id + ".csv");
    write_subset(matrix, path);
    std::cout << id << ": " << matrix.row_count() << " rows, "
              << matrix.feature_count() << " features -> " << path.string()
              << "\n";
  };

  if (!args.paper_shape) {
    emit(args.id, normalize(generate_synthetic(args.spec)));
    return 0;
  }
  for (const auto& [id, matrix] : paper_shape_matrices(args.spec))
    emit(id, matrix);
  return 0;
}

struct WalkArgs {
  std::string input;
  std::string out_dir;
  WalkConfig walk;
  double top_fraction = 0.6;
};

int cmd_walk(const WalkArgs& args) {
  FeatureMatrix matrix = normalize(read_matrix(args.input));
  KeyPath path = extract_key_path(matrix, args.walk, args.top_fraction);

  fs::create_directories(args.out_dir);
  fs::path out =
      fs::path(args.out_dir) / (fs::path(args.input).stem().string() +
                                ".keypath");
  write_text(out, path.to_text());
  std::cout << path.to_text();
  std::cout << "key path of " << path.activities.size() << " activities -> "
            << out.string() << "\n";
  return 0;
}

struct ClusterArgs {
  std::string input;
  std::string out_dir;
  std::string variant = "baseline";
  BirchConfig birch;
  WalkConfig walk;
  double top_fraction = 0.6;
};

void write_cluster_outputs(const fs::path& out_dir, const std::string& stem,
                           const FeatureMatrix& plotted,
                           const RunResult& result) {
  std::string assignment = "row,label\n";
  for (std::size_t i = 0; i < result.assignment.labels.size(); ++i)
    assignment +=
        std::to_string(i) + "," + std::to_string(result.assignment.labels[i]) +
        "\n";
  write_text(out_dir / (stem + ".assignment.csv"), assignment);

  std::string report = model_report(result.model);
  if (result.key_path) {
    report += "keypath\n";
    report += result.key_path->to_text();
  }
  write_text(out_dir / (stem + ".report.txt"), report);

  std::string title = stem + " (" + std::string(to_string(result.variant)) +
                      ", " + std::to_string(result.model.cluster_count()) +
                      " clusters)";
  write_text(out_dir / (stem + ".svg"),
             scatter_svg(plotted.rows, result.assignment.labels, title));
}

int cmd_cluster(const ClusterArgs& args) {
  FeatureMatrix matrix = normalize(read_matrix(args.input));
  fs::create_directories(args.out_dir);
  std::string stem = fs::path(args.input).stem().string();

  auto run_variant = [&](Variant variant) {
    std::string suffix =
        args.variant == "both"
            ? "." + std::string(to_string(variant))
            : "";
    RunResult result =
        variant == Variant::Baseline
            ? run_baseline(stem, matrix, args.birch)
            : run_improved(stem, matrix, args.birch, args.walk,
                           args.top_fraction);
    FeatureMatrix plotted =
        result.key_path ? project_features(matrix, *result.key_path) : matrix;
    write_cluster_outputs(args.out_dir, stem + suffix, plotted, result);
    std::cout << stem << " " << to_string(variant) << ": "
              << result.model.cluster_count() << " clusters\n";
  };

  if (args.variant == "baseline" || args.variant == "both")
    run_variant(Variant::Baseline);
  if (args.variant == "improved" || args.variant == "both")
    run_variant(Variant::Improved);
  return 0;
}

struct CompareArgs {
  std::string input_dir;
  std::string out_dir;
  CompareConfig config;
  bool paper_shape = false;  // synthesize the 22-subset layout in memory
  std::uint64_t seed = 0;
};

std::string summary_csv(const Comparison& comparison) {
  struct Extract {
    const char* name;
    double ScoreBundle::* field;
  };
  constexpr Extract kMetrics[] = {
      {"precise", &ScoreBundle::precise},
      {"accuracy", &ScoreBundle::accuracy},
      {"recall", &ScoreBundle::recall},
      {"f_score", &ScoreBundle::f_score},
  };

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  std::string out =
      "metric,subsets,median_baseline,median_improved,median_delta,"
      "improved_wins,ties\n";
  for (const Extract& metric : kMetrics) {
    std::vector<double> base, improved, delta;
    int wins = 0, ties = 0;
    for (const SubsetOutcome& row : comparison.rows) {
      if (!row.ok() || !row.baseline->scores || !row.improved->scores)
        continue;
      double b = (*row.baseline->scores).*metric.field;
      double m = (*row.improved->scores).*metric.field;
      base.push_back(b);
      improved.push_back(m);
      delta.push_back(m - b);
      if (m > b)
        ++wins;
      else if (m == b)
        ++ties;
    }
    out += metric.name;
    out += ',' + std::to_string(base.size());
    if (base.empty()) {
      out += ",,,,,\n";
      continue;
    }
    out += ',' + format_number(median(base));
    out += ',' + format_number(median(improved));
    out += ',' + format_number(median(delta));
    out += ',' + std::to_string(wins);
    out += ',' + std::to_string(ties);
    out += '\n';
  }
  return out;
}

int cmd_compare(const CompareArgs& args) {
  std::vector<std::pair<std::string, FeatureMatrix>> matrices;
  if (args.paper_shape) {
    SyntheticSpec base;
    base.seed = args.seed;
    matrices = paper_shape_matrices(base);
  } else {
    if (args.input_dir.empty())
      fail(Errc::InvalidConfig, "either --input or --paper-shape is required");
    std::vector<fs::path> files;
    if (fs::is_directory(args.input_dir))
      for (const auto& entry : fs::directory_iterator(args.input_dir))
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      fail(Errc::InvalidConfig, "no .csv inputs under '" + args.input_dir + "'");
    matrices.reserve(files.size());
    for (const fs::path& file : files)
      matrices.emplace_back(file.stem().string(), normalize(read_matrix(file)));
  }

  Comparison comparison = compare(matrices, args.config);

  fs::create_directories(args.out_dir);
  write_text(fs::path(args.out_dir) / "comparison.csv",
             comparison_csv(comparison));
  write_text(fs::path(args.out_dir) / "summary.csv", summary_csv(comparison));

  // Per-metric line charts over subsets, both variants as series.
  struct Extract {
    const char* name;
    double ScoreBundle::* field;
  };
  constexpr Extract kMetrics[] = {
      {"precise", &ScoreBundle::precise},
      {"accuracy", &ScoreBundle::accuracy},
      {"recall", &ScoreBundle::recall},
      {"f_score", &ScoreBundle::f_score},
  };
  std::vector<std::string> ids;
  for (const SubsetOutcome& row : comparison.rows)
    if (row.ok() && row.baseline->scores && row.improved->scores)
      ids.push_back(row.id);
  for (const Extract& metric : kMetrics) {
    Series base{"baseline", {}}, improved{"improved", {}};
    for (const SubsetOutcome& row : comparison.rows) {
      if (!row.ok() || !row.baseline->scores || !row.improved->scores)
        continue;
      base.values.push_back((*row.baseline->scores).*metric.field);
      improved.values.push_back((*row.improved->scores).*metric.field);
    }
    std::vector<Series> series{base, improved};
    write_text(fs::path(args.out_dir) /
                   ("compare_" + std::string(metric.name) + ".svg"),
               line_svg(metric.name, ids, series));
  }

  std::size_t failed = 0;
  for (const SubsetOutcome& row : comparison.rows)
    if (!row.ok()) ++failed;
  std::cout << "compared " << comparison.rows.size() << " subsets ("
            << failed << " failed) -> " << args.out_dir << "\n";
  std::cout << summary_csv(comparison);
  if (failed == comparison.rows.size()) {
    std::cerr << "error: every subset failed\n";
    return kExitRuntime;
  }
  return 0;
}

void add_tree_flags(CLI::App* cmd, BirchConfig& config) {
  cmd->add_option("--threshold-t", config.tree.radius_threshold,
                  "max leaf entry radius");
  cmd->add_option("--branching-b", config.tree.branching,
                  "max entries per internal node");
  cmd->add_option("--leaf-l", config.tree.leaf_capacity,
                  "max entries per leaf");
  cmd->add_option("--min-points", config.outlier_min_points,
                  "min points for a leaf entry to survive filtering");
}

void add_walk_flags(CLI::App* cmd, WalkConfig& walk, double& top_fraction) {
  cmd->add_option("--lambda", walk.lambda0, "initial step length");
  cmd->add_option("--epsilon", walk.epsilon, "termination accuracy");
  cmd->add_option("--tries", walk.max_tries, "tries per round");
  cmd->add_option("--walk-steps", walk.steps,
                  "walk transitions (0 = 10x feature count)");
  cmd->add_option("--top-fraction", top_fraction,
                  "fraction of activities kept in the key path");
}

// The two global stopping rules are mutually exclusive; the parsed
// values land in optionals only when given.
struct StopFlags {
  double merge_distance = 0;
  int cluster_count = 0;
  CLI::Option* merge_opt = nullptr;
  CLI::Option* count_opt = nullptr;

  void add(CLI::App* cmd) {
    count_opt = cmd->add_option("--clusters", cluster_count,
                                "global target cluster count");
    merge_opt = cmd->add_option("--merge-distance", merge_distance,
                                "global merge distance cap");
    count_opt->excludes(merge_opt);
  }

  void apply(BirchConfig& config, int default_clusters) const {
    if (merge_opt && merge_opt->count() > 0)
      config.merge_distance = merge_distance;
    else if (count_opt && count_opt->count() > 0)
      config.cluster_count = cluster_count;
    else
      config.cluster_count = default_clusters;
  }
};

}  // namespace

static int run_main(int argc, char** argv) {
  CLI::App app{"memory-bounded clustering with a random-walk feature filter"};
  app.require_subcommand(1);

  GenerateArgs generate;
  CLI::App* gen = app.add_subcommand("generate", "write synthetic subsets");
  gen->add_option("--out", generate.out_dir, "output directory")->required();
  gen->add_option("--seed", generate.spec.seed, "generator seed");
  gen->add_option("--id", generate.id, "subset file name (without .csv)");
  gen->add_option("--clusters", generate.spec.cluster_count, "cluster count");
  gen->add_option("--informative", generate.spec.informative_features,
                  "informative feature count");
  gen->add_option("--distractors", generate.spec.distractor_features,
                  "distractor feature count");
  gen->add_option("--points", generate.spec.points_per_cluster,
                  "points per cluster");
  gen->add_option("--variance", generate.spec.variance,
                  "Gaussian variance of informative noise");
  gen->add_option("--outlier-fraction", generate.spec.outlier_fraction,
                  "fraction of points replaced by box outliers");
  gen->add_option("--span", generate.spec.span, "centroid span");
  gen->add_flag("--paper-shape", generate.paper_shape,
                "emit the 22-subset benchmark layout");
  gen->set_config("--config");

  WalkArgs walk_args;
  CLI::App* walk = app.add_subcommand("walk", "extract a key path");
  walk->add_option("--input", walk_args.input, "matrix CSV")->required();
  walk->add_option("--out", walk_args.out_dir, "output directory")->required();
  walk->add_option("--seed", walk_args.walk.seed, "walk seed");
  add_walk_flags(walk, walk_args.walk, walk_args.top_fraction);
  walk->set_config("--config");

  ClusterArgs cluster_args;
  StopFlags cluster_stop;
  CLI::App* cluster = app.add_subcommand("cluster", "cluster one subset");
  cluster->add_option("--input", cluster_args.input, "matrix CSV")->required();
  cluster->add_option("--out", cluster_args.out_dir, "output directory")
      ->required();
  cluster
      ->add_option("--variant", cluster_args.variant,
                   "baseline | improved | both")
      ->check(CLI::IsMember({"baseline", "improved", "both"}));
  cluster->add_option("--seed", cluster_args.walk.seed, "walk seed");
  add_tree_flags(cluster, cluster_args.birch);
  cluster_stop.add(cluster);
  add_walk_flags(cluster, cluster_args.walk, cluster_args.top_fraction);
  cluster->set_config("--config");

  CompareArgs compare_args;
  compare_args.config.workers = 0;  // resolved to the logical CPU count
  StopFlags compare_stop;
  CLI::App* cmp = app.add_subcommand("compare",
                                     "run both variants over a directory");
  cmp->add_option("--input", compare_args.input_dir,
                  "directory of matrix CSVs");
  cmp->add_option("--out", compare_args.out_dir, "output directory")
      ->required();
  cmp->add_option("--seed", compare_args.seed,
                  "seed for walks and --paper-shape data");
  cmp->add_flag("--paper-shape", compare_args.paper_shape,
                "compare over the generated 22-subset layout");
  add_tree_flags(cmp, compare_args.config.birch);
  compare_stop.add(cmp);
  add_walk_flags(cmp, compare_args.config.walk,
                 compare_args.config.top_fraction);
  cmp->add_option("--workers", compare_args.config.workers,
                  "worker pool size (0 = logical CPUs)");
  cmp->set_config("--config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Uniform exit discipline: help exits 0, every usage problem exits 2.
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      generate.spec.validate();
      return cmd_generate(generate);
    }
    if (walk->parsed()) {
      walk_args.walk.validate();
      return cmd_walk(walk_args);
    }
    if (cluster->parsed()) {
      cluster_stop.apply(cluster_args.birch, 4);
      cluster_args.birch.validate();
      cluster_args.walk.validate();
      return cmd_cluster(cluster_args);
    }
    if (cmp->parsed()) {
      compare_stop.apply(compare_args.config.birch, 4);
      compare_args.config.walk.seed = compare_args.seed;
      if (compare_args.config.workers == 0)
        compare_args.config.workers = static_cast<int>(
            std::max(1u, std::thread::hardware_concurrency()));
      if (compare_args.config.workers < 0)
        fail(Errc::InvalidConfig, "workers must be >= 0");
      compare_args.config.birch.validate();
      compare_args.config.walk.validate();
      return cmd_compare(compare_args);
    }
  } catch (const Error& e) {
    bool usage = e.code() == Errc::InvalidSpec || e.code() == Errc::InvalidConfig;
    std::cerr << "error: " << e.what() << "\n";
    if (usage) std::cerr << "run with --help for usage\n";
    return usage ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (...) {
    std::cerr << "error: unknown failure\n";
    return kExitRuntime;
  }
}
