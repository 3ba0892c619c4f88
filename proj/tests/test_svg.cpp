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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "walkbirch/svg.hpp"

using namespace walkbirch;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& what) {
  std::size_t count = 0, at = 0;
  while ((at = text.find(what, at)) != std::string::npos) {
    ++count;
    at += what.size();
  }
  return count;
}

}  // namespace

TEST_CASE("scatter_svg renders one glyph per row, colored by label") {
  Matrix points = oracles::random_matrix(91, 25, 2);
  std::vector<int> labels;
  for (int i = 0; i < 25; ++i) labels.push_back(i % 3);

  std::string svg = scatter_svg(points, labels, "blobs");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_occurrences(svg, "<circle") == 25);
  CHECK(svg.find("blobs") != std::string::npos);
  CHECK(svg == scatter_svg(points, labels, "blobs"));  // deterministic

  SUBCASE("distinct labels use distinct fills; -1 is gray") {
    std::vector<int> mixed = labels;
    mixed[0] = -1;
    std::string plot = scatter_svg(points, mixed, "t");
    CHECK(plot.find("#999999") != std::string::npos);
  }

  SUBCASE("a single-label plot uses exactly one fill color") {
    std::vector<int> ones(25, 0);
    std::string plot = scatter_svg(points, ones, "t");
    std::set<std::string> fills;
    std::size_t at = 0;
    while ((at = plot.find("fill=\"#", at)) != std::string::npos) {
      fills.insert(plot.substr(at + 6, 8));
      ++at;
    }
    CHECK(fills.size() == 1);
  }

  SUBCASE("one-column input still renders") {
    Matrix one = oracles::random_matrix(92, 10, 1);
    std::vector<int> l(10, 0);
    CHECK(count_occurrences(scatter_svg(one, l, "1d"), "<circle") == 10);
  }
}

TEST_CASE("line_svg draws one polyline per series") {
  std::vector<std::string> x = {"a", "b", "c", "d"};
  std::vector<Series> series{{"baseline", {0.4, 0.5, 0.45, 0.6}},
                             {"improved", {0.5, 0.55, 0.52, 0.7}}};
  std::string svg = line_svg("f_score", x, series);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_occurrences(svg, "<polyline") == 2);
  CHECK(svg.find("baseline") != std::string::npos);
  CHECK(svg.find("improved") != std::string::npos);
  CHECK(svg == line_svg("f_score", x, series));

  SUBCASE("single point series does not divide by zero") {
    std::vector<std::string> one = {"only"};
    std::vector<Series> s{{"a", {0.5}}};
    std::string plot = line_svg("t", one, s);
    CHECK(plot.find("</svg>") != std::string::npos);
  }
}
