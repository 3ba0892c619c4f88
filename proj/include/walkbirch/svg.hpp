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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "walkbirch/types.hpp"

namespace walkbirch {

/// Scatter of the first two matrix columns, one color class per label
/// (label -1 renders gray). Output is plain text with fixed-precision
/// coordinates, stable across runs.
std::string scatter_svg(const Matrix& points, std::span<const int> labels,
                        std::string_view title);

struct Series {
  std::string name;
  std::vector<double> values;
};

/// Line chart of one or more series over shared categorical x positions.
std::string line_svg(std::string_view title,
                     std::span<const std::string> x_labels,
                     std::span<const Series> series);

}  // namespace walkbirch
