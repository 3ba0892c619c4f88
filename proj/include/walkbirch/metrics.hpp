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

#include <chrono>
#include <cstdint>
#include <span>
#include <type_traits>
#include <utility>

#include "walkbirch/types.hpp"

namespace walkbirch {

/// Pair-level confusion counts between a ground-truth and a predicted
/// labeling: every unordered pair of points is positive when co-clustered.
/// Points with truth label -1 are excluded entirely.
struct PairConfusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
};

/// Counts agreement over all unordered pairs. Relabel-invariant on both
/// sides. Throws LengthMismatch.
PairConfusion pair_confusion(std::span<const int> truth,
                             std::span<const int> predicted);

/// TP / (TP + FP); 0 when the denominator is 0.
double precise(const PairConfusion& c);

/// (TP + TN) / total. Throws EmptyConfusion when total is 0.
double accuracy(const PairConfusion& c);

/// TP / (TP + FN); 0 when the denominator is 0.
double recall(const PairConfusion& c);

/// Harmonic mean of precise and recall; 0 when both are 0.
double f_score(const PairConfusion& c);

struct ScoreBundle {
  double precise = 0;
  double accuracy = 0;
  double recall = 0;
  double f_score = 0;
};

ScoreBundle score_bundle(const PairConfusion& c);

/// Runs `fn` once under a monotonic clock; returns its result and the
/// elapsed seconds.
template <class F>
auto benchmark(F&& fn) -> std::pair<std::invoke_result_t<F&&>, double> {
  auto start = std::chrono::steady_clock::now();
  auto result = std::forward<F>(fn)();
  std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  return {std::move(result), elapsed.count()};
}

}  // namespace walkbirch
