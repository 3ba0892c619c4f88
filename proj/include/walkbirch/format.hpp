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

#include <string>

namespace walkbirch {

/// Integral values print as plain integers, everything else as the
/// shortest decimal that parses back to the same double.
std::string format_number(double value);

/// Fixed-precision rendering for layout output (plots), deterministic
/// across runs.
std::string format_fixed(double value, int decimals);

}  // namespace walkbirch
