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

// End-to-end gate: every check below runs against brute-force oracles or
// seeded synthetic data and prints one PASS/FAIL line. Exit status is the
// number of failed checks.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "walkbirch/birch.hpp"
#include "walkbirch/dataset.hpp"
#include "walkbirch/metrics.hpp"
#include "walkbirch/pipeline.hpp"
#include "walkbirch/random_walk.hpp"

using namespace walkbirch;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }

  void note(const std::string& info) {
    if (!detail.empty()) detail += "; ";
    detail += info;
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

// --- 1. CF oracle equivalence --------------------------------------------

Check cf_oracle_equivalence() {
  Check check;
  for (Index d : {Index{2}, Index{10}, Index{20}}) {
    std::mt19937_64 rng(100 + static_cast<std::uint64_t>(d));
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Vector> points;
    for (int i = 0; i < 1000; ++i) {
      Vector x(d);
      for (Index j = 0; j < d; ++j) x[j] = u(rng);
      points.push_back(x);
    }

    TreeParams params;
    params.dimension = d;
    params.radius_threshold = 0.4;
    auto [tree, seconds] = benchmark([&] {
      CfTree t(params);
      for (const Vector& p : points) t.insert(p);
      return t;
    });
    check.expect(seconds < 1.0,
                 "d=" + std::to_string(d) + " build took " + fmt(seconds) + "s");

    ClusteringFeature root = tree.root_cf();
    oracles::BruteCf brute = oracles::brute_cf(points);
    check.expect(root.n == brute.n, "point count mismatch");
    for (Index j = 0; j < d; ++j) {
      check.expect(std::abs(root.ls[j] - brute.ls[j]) <=
                       1e-9 * (1 + std::abs(brute.ls[j])),
                   "ls drift at d=" + std::to_string(d));
      check.expect(std::abs(root.ss[j] - brute.ss[j]) <=
                       1e-9 * (1 + std::abs(brute.ss[j])),
                   "ss drift at d=" + std::to_string(d));
    }
  }
  return check;
}

// --- 2. Radius oracle ------------------------------------------------------

Check radius_oracle() {
  Check check;
  std::mt19937_64 rng(200);
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_int_distribution<Index> dims(1, 12);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    Index d = dims(rng);
    int n = size(rng);
    std::vector<Vector> points;
    ClusteringFeature cf = cf_zero(d);
    for (int i = 0; i < n; ++i) {
      Vector x(d);
      for (Index j = 0; j < d; ++j) x[j] = u(rng);
      points.push_back(x);
      cf = cf_merge(cf, cf_from_point(x));
    }
    double brute = oracles::brute_radius(points);
    check.expect(std::abs(cf_radius(cf) - brute) <= 1e-9 * (1 + brute),
                 "trial " + std::to_string(trial));
  }
  return check;
}

// --- 3. Tree invariant suite ----------------------------------------------

Check tree_invariant_suite() {
  Check check;
  TreeParams params;
  params.dimension = 3;
  params.radius_threshold = 0.3;
  params.leaf_capacity = 6;
  params.branching = 6;
  params.track_points = true;
  CfTree tree(params);

  std::mt19937_64 rng(300);
  std::normal_distribution<double> g(0.0, 0.15);
  std::uniform_int_distribution<int> blob(0, 4);
  std::uniform_real_distribution<double> wide(0, 2);
  try {
    for (int i = 0; i < 10000; ++i) {
      Vector x(3);
      if (i % 7 == 0) {
        for (Index j = 0; j < 3; ++j) x[j] = wide(rng);
      } else {
        double center = 0.5 * blob(rng);
        for (Index j = 0; j < 3; ++j) x[j] = center + g(rng);
      }
      tree.insert(x);
      tree.check_invariants();
    }
  } catch (const std::exception& e) {
    check.expect(false, e.what());
    return check;
  }
  check.expect(tree.point_total() == 10000, "insert count");
  check.note("10000 inserts, " +
             std::to_string(tree.leaf_entries().size()) + " leaf entries");
  return check;
}

// --- 4. Metric formulas ----------------------------------------------------

Check metric_formulas() {
  Check check;
  PairConfusion c;
  c.tp = 3;
  c.fp = 1;
  c.tn = 4;
  c.fn = 2;
  check.expect(std::abs(precise(c) - 0.75) <= 1e-12, "precise");
  check.expect(std::abs(recall(c) - 0.6) <= 1e-12, "recall");
  check.expect(std::abs(accuracy(c) - 0.7) <= 1e-12, "accuracy");
  check.expect(std::abs(f_score(c) - 2.0 / 3.0) <= 1e-12, "f_score");

  std::mt19937_64 rng(400);
  std::uniform_int_distribution<int> label(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> truth;
    for (int i = 0; i < 50; ++i) truth.push_back(label(rng));
    ScoreBundle s = score_bundle(pair_confusion(truth, truth));
    check.expect(s.precise == 1.0 && s.accuracy == 1.0 && s.recall == 1.0 &&
                     s.f_score == 1.0,
                 "perfect clustering must score 1");
  }
  return check;
}

// --- 5. RW descent convergence ---------------------------------------------

Check rw_descent_convergence() {
  Check check;
  Vector c(5);
  c << 0.3, 0.7, -0.2, 0.5, 0.1;
  Objective f = [&c](const Vector& x) { return (x - c).squaredNorm(); };

  int converged = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    WalkConfig config;  // defaults: lambda 1.0, epsilon 1e-4, tries 100
    config.seed = seed;
    DescentResult r = rw_descent(f, Vector::Zero(5), config);
    if ((r.x_best - c).norm() < 0.05) ++converged;
    for (std::size_t i = 1; i < r.accepted_trace.size(); ++i)
      check.expect(r.accepted_trace[i] < r.accepted_trace[i - 1],
                   "trace not strictly decreasing at seed " +
                       std::to_string(seed));
    check.expect(r.final_step < config.epsilon,
                 "terminated with step >= epsilon at seed " +
                     std::to_string(seed));
  }
  check.expect(converged >= 19, "only " + std::to_string(converged) +
                                    "/20 seeds within 0.05");
  check.note(std::to_string(converged) + "/20 seeds converged");
  return check;
}

// --- 6. Walk oracle ----------------------------------------------------------

Check walk_oracle() {
  Check check;
  TransitionMatrix tm;
  tm.p = Matrix(3, 3);
  tm.p << 0, 0.25, 0.75, 0.6, 0, 0.4, 0.5, 0.5, 0;

  Vector stationary = oracles::power_iteration_stationary(tm.p);
  WalkConfig config;
  config.steps = 100000;
  config.seed = 600;
  Vector freq = graph_walk(tm, config);
  double gap = (freq - stationary).cwiseAbs().maxCoeff();
  check.expect(gap < 0.05, "L_inf gap " + fmt(gap));
  check.note("L_inf gap " + fmt(gap));
  return check;
}

// --- 7 & 8. Benchmark: quality and timing -----------------------------------

struct BenchmarkOutcome {
  int wins = 0;
  std::vector<double> deltas;
  std::vector<double> baseline_times;
  std::vector<double> improved_times;
  double slowest_subset = 0;
};

BenchmarkOutcome run_benchmark() {
  BenchmarkOutcome outcome;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticSpec spec;
    spec.cluster_count = 4;
    spec.informative_features = 8;
    spec.distractor_features = 8;
    spec.points_per_cluster = 500;  // 2000 points per subset
    std::mt19937_64 rng(7000 + seed);
    spec.variance = std::uniform_real_distribution<double>(0.3, 0.4)(rng);
    spec.seed = 7000 + seed;
    FeatureMatrix matrix = normalize(generate_synthetic(spec));

    BirchConfig birch;
    birch.cluster_count = 4;
    birch.tree.radius_threshold = 0.35;
    WalkConfig walk;
    walk.seed = seed;

    RunResult base = run_baseline("s" + std::to_string(seed), matrix, birch);
    RunResult improved =
        run_improved("s" + std::to_string(seed), matrix, birch, walk, 0.6);

    outcome.deltas.push_back(improved.scores->f_score - base.scores->f_score);
    outcome.wins += improved.scores->f_score >= base.scores->f_score;
    outcome.baseline_times.push_back(base.wall_time_s);
    outcome.improved_times.push_back(improved.wall_time_s);
    outcome.slowest_subset = std::max(
        outcome.slowest_subset, std::max(base.wall_time_s, improved.wall_time_s));
  }
  return outcome;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Check benchmark_quality(const BenchmarkOutcome& outcome) {
  Check check;
  double median_delta = median(outcome.deltas);
  check.expect(outcome.wins >= 14,
               "improved >= baseline in only " + std::to_string(outcome.wins) +
                   "/20 subsets");
  check.expect(median_delta >= 0.0,
               "median f-score delta " + fmt(median_delta) + " < 0");
  check.expect(outcome.slowest_subset < 5.0,
               "slowest run " + fmt(outcome.slowest_subset) + "s");
  check.note("wins " + std::to_string(outcome.wins) + "/20, median delta " +
             fmt(median_delta) + ", slowest run " + fmt(outcome.slowest_subset) +
             "s");
  return check;
}

Check benchmark_timing(const BenchmarkOutcome& outcome) {
  Check check;
  double base = median(outcome.baseline_times);
  double improved = median(outcome.improved_times);
  double ratio = improved / base;
  check.note("median baseline " + fmt(base) + "s, median improved " +
             fmt(improved) + "s, ratio " + fmt(ratio));
  if (ratio > 1.0 && ratio < 1.2) {
    // Machine-dependent gray zone: report without failing.
    check.note("ratio above 1.0 but below 1.2: reported, not failed");
  } else {
    check.expect(ratio <= 1.0, "median improved time exceeds baseline, ratio " +
                                   fmt(ratio));
  }
  return check;
}

// --- 9. Identity reduction ---------------------------------------------------

Check identity_reduction() {
  Check check;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix rows = oracles::random_matrix(900 + seed, 120, 6);
    FeatureMatrix m;
    m.rows = rows;
    m.feature_names.assign(activity_catalog().begin(),
                           activity_catalog().begin() + 6);
    for (Index r = 0; r < rows.rows(); ++r)
      m.learner_ids.push_back(std::to_string(r));

    BirchConfig birch;
    birch.cluster_count = 3;
    birch.tree.radius_threshold = 0.3;
    WalkConfig walk;
    walk.seed = seed;

    RunResult base = run_baseline("m", m, birch);
    RunResult full = run_improved("m", m, birch, walk, 1.0);
    check.expect(oracles::canonical_labels(base.assignment.labels) ==
                     oracles::canonical_labels(full.assignment.labels),
                 "partition differs at seed " + std::to_string(seed));
  }
  return check;
}

// --- 10. End-to-end determinism ----------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing " + path.string() + ">";
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

// comparison.csv minus its wall-clock column, which is the one
// legitimately run-dependent field.
std::string mask_time_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (cells.size() >= 8) cells[7] = "<time>";
    for (std::size_t i = 0; i < cells.size(); ++i)
      out += (i ? "," : "") + cells[i];
    out += '\n';
  }
  return out;
}

Check end_to_end_determinism() {
  Check check;
  fs::path dir = oracles::scratch_dir("acceptance_cli");
  fs::path out_a = dir / "a";
  fs::path out_b = dir / "b";

  std::string base = std::string(WALKBIRCH_CLI_PATH) +
                     " compare --paper-shape --seed 7 --out ";
  for (const fs::path& out : {out_a, out_b}) {
    std::string command = base + out.string() + " >/dev/null 2>&1";
    int status = std::system(command.c_str());
    check.expect(status != -1 && WEXITSTATUS(status) == 0,
                 "compare run failed in " + out.string());
  }
  if (!check.pass) return check;

  std::vector<std::string> files = {
      "summary.csv",          "compare_precise.svg", "compare_accuracy.svg",
      "compare_recall.svg",   "compare_f_score.svg",
  };
  for (const std::string& name : files)
    check.expect(slurp(out_a / name) == slurp(out_b / name),
                 name + " differs between runs");
  check.expect(mask_time_column(slurp(out_a / "comparison.csv")) ==
                   mask_time_column(slurp(out_b / "comparison.csv")),
               "comparison.csv differs beyond the time column");

  // The summary must aggregate win counts over all 22 subsets per metric.
  std::string summary = slurp(out_a / "summary.csv");
  for (const char* metric : {"precise", "accuracy", "recall", "f_score"})
    check.expect(summary.find(std::string(metric) + ",22,") !=
                     std::string::npos,
                 std::string(metric) + " row missing the 22-subset count");
  return check;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Check()> run;
  };

  BenchmarkOutcome benchmark_outcome;
  bool benchmark_ready = false;
  auto ensure_benchmark = [&] {
    if (!benchmark_ready) {
      benchmark_outcome = run_benchmark();
      benchmark_ready = true;
    }
  };

  std::vector<Criterion> criteria = {
      {"1. CF oracle equivalence (1000 pts, d in {2,10,20}, <1s, 1e-9)",
       cf_oracle_equivalence},
      {"2. radius oracle (200 random point sets, 1e-9)", radius_oracle},
      {"3. tree invariant suite (10000 randomized inserts)",
       tree_invariant_suite},
      {"4. metric formulas (tp3 fp1 tn4 fn2; perfect = all ones)",
       metric_formulas},
      {"5. rw descent convergence (5-d bowl, 19/20 seeds within 0.05)",
       rw_descent_convergence},
      {"6. walk oracle (3-state chain vs stationary, L_inf < 0.05)",
       walk_oracle},
      {"7. improved beats baseline (20 subsets, f-score wins >= 70%)",
       [&] {
         ensure_benchmark();
         return benchmark_quality(benchmark_outcome);
       }},
      {"8. improved is not slower (median wall-time ratio)",
       [&] {
         ensure_benchmark();
         return benchmark_timing(benchmark_outcome);
       }},
      {"9. identity reduction (top fraction 1 on 10 random matrices)",
       identity_reduction},
      {"10. end-to-end determinism (compare --paper-shape --seed 7 twice)",
       end_to_end_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception& e) {
      check.pass = false;
      check.note(std::string("exception: ") + e.what());
    }
    failures += !check.pass;
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << criterion.name;
    if (!check.detail.empty()) std::cout << " -- " << check.detail;
    std::cout << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures;
}
