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

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "walkbirch/types.hpp"

namespace walkbirch {

/// The closed catalog of interaction activity features. Enumerator order is
/// the canonical feature order everywhere in the library.
enum class ActivityKind : int {
  Dataplus,
  Dualpane,
  Externalquiz,
  Folder,
  Forumng,
  Glossary,
  Homepage,
  Htmlactivity,
  Collaborate,
  Content,
  Illuminate,
  Wiki,
  Page,
  Questionnaire,
  Quiz,
  Repeatactivity,
  Resource,
  Sharedsubpage,
  Subpage,
  Url,
};

inline constexpr int kActivityCount = 20;

/// All 20 activities in catalog order.
std::span<const ActivityKind> activity_catalog();

std::string_view to_string(ActivityKind kind);
std::optional<ActivityKind> parse_activity(std::string_view name);

/// Position of `kind` in the catalog (0-based).
int catalog_index(ActivityKind kind);

enum class Category { SocialScience, Stem };

std::string_view to_string(Category category);

/// Identifies one independently clustered subset: category, course within
/// the category (S1..S4 / T1..T3) and learning period (1..4).
struct SubsetKey {
  Category category = Category::SocialScience;
  int course = 1;
  int period = 1;

  auto operator<=>(const SubsetKey&) const = default;

  std::string course_label() const;  // "S2"
  std::string label() const;         // "S2-1"
};

/// Validating constructor: courses 1..4 for SocialScience, 1..3 for Stem,
/// periods 1..4. Throws Errc::InvalidSpec otherwise.
SubsetKey make_subset_key(Category category, int course, int period);

/// Parses labels of the form "S2-1" / "T3-4"; nullopt when the text is not
/// a valid subset label.
std::optional<SubsetKey> parse_subset_key(std::string_view text);

}  // namespace walkbirch
