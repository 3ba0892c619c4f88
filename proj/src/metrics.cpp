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

#include "walkbirch/metrics.hpp"

#include <map>
#include <utility>

namespace walkbirch {

PairConfusion pair_confusion(std::span<const int> truth,
                             std::span<const int> predicted) {
  if (truth.size() != predicted.size())
    fail(Errc::LengthMismatch, "pair_confusion: label lengths differ");

  // Contingency counts over points with known truth; pair counts follow
  // from same-truth / same-predicted marginals.
  std::map<std::pair<int, int>, std::uint64_t> joint;
  std::map<int, std::uint64_t> by_truth;
  std::map<int, std::uint64_t> by_predicted;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == -1) continue;
    ++joint[{truth[i], predicted[i]}];
    ++by_truth[truth[i]];
    ++by_predicted[predicted[i]];
    ++n;
  }

  auto pairs = [](std::uint64_t k) { return k * (k - 1) / 2; };
  std::uint64_t same_both = 0, same_truth = 0, same_predicted = 0;
  for (const auto& [key, count] : joint) same_both += pairs(count);
  for (const auto& [key, count] : by_truth) same_truth += pairs(count);
  for (const auto& [key, count] : by_predicted) same_predicted += pairs(count);

  PairConfusion c;
  c.tp = same_both;
  c.fp = same_predicted - same_both;
  c.fn = same_truth - same_both;
  c.tn = pairs(n) - c.tp - c.fp - c.fn;
  return c;
}

double precise(const PairConfusion& c) {
  std::uint64_t denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double accuracy(const PairConfusion& c) {
  std::uint64_t denom = c.total();
  if (denom == 0) fail(Errc::EmptyConfusion, "accuracy of an empty confusion");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(denom);
}

double recall(const PairConfusion& c) {
  std::uint64_t denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f_score(const PairConfusion& c) {
  double p = precise(c);
  double r = recall(c);
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

ScoreBundle score_bundle(const PairConfusion& c) {
  return ScoreBundle{precise(c), accuracy(c), recall(c), f_score(c)};
}

}  // namespace walkbirch
