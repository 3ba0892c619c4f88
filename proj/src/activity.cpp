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

#include "walkbirch/activity.hpp"

#include <algorithm>

namespace walkbirch {

namespace {

constexpr std::array<ActivityKind, kActivityCount> kCatalog = {
    ActivityKind::Dataplus,      ActivityKind::Dualpane,
    ActivityKind::Externalquiz,  ActivityKind::Folder,
    ActivityKind::Forumng,       ActivityKind::Glossary,
    ActivityKind::Homepage,      ActivityKind::Htmlactivity,
    ActivityKind::Collaborate,   ActivityKind::Content,
    ActivityKind::Illuminate,    ActivityKind::Wiki,
    ActivityKind::Page,          ActivityKind::Questionnaire,
    ActivityKind::Quiz,          ActivityKind::Repeatactivity,
    ActivityKind::Resource,      ActivityKind::Sharedsubpage,
    ActivityKind::Subpage,       ActivityKind::Url,
};

constexpr std::array<std::string_view, kActivityCount> kNames = {
    "dataplus",     "dualpane",       "externalquiz", "folder",
    "forumng",      "glossary",       "homepage",     "htmlactivity",
    "collaborate",  "content",        "illuminate",   "wiki",
    "page",         "questionnaire",  "quiz",         "repeatactivity",
    "resource",     "sharedsubpage",  "subpage",      "url",
};

}  // namespace

std::span<const ActivityKind> activity_catalog() { return kCatalog; }

std::string_view to_string(ActivityKind kind) {
  return kNames[static_cast<int>(kind)];
}

std::optional<ActivityKind> parse_activity(std::string_view name) {
  auto it = std::find(kNames.begin(), kNames.end(), name);
  if (it == kNames.end()) return std::nullopt;
  return kCatalog[static_cast<std::size_t>(it - kNames.begin())];
}

int catalog_index(ActivityKind kind) { return static_cast<int>(kind); }

std::string_view to_string(Category category) {
  return category == Category::SocialScience ? "SocialScience" : "STEM";
}

std::string SubsetKey::course_label() const {
  char prefix = category == Category::SocialScience ? 'S' : 'T';
  return std::string(1, prefix) + std::to_string(course);
}

std::string SubsetKey::label() const {
  return course_label() + "-" + std::to_string(period);
}

SubsetKey make_subset_key(Category category, int course, int period) {
  int max_course = category == Category::SocialScience ? 4 : 3;
  if (course < 1 || course > max_course)
    fail(Errc::InvalidSpec, "course out of range for category: " +
                                std::to_string(course));
  if (period < 1 || period > 4)
    fail(Errc::InvalidSpec, "period out of range: " + std::to_string(period));
  return SubsetKey{category, course, period};
}

std::optional<SubsetKey> parse_subset_key(std::string_view text) {
  // Accepted shape: [ST]<digit>-<digit>
  if (text.size() != 4 || text[2] != '-') return std::nullopt;
  Category category;
  if (text[0] == 'S')
    category = Category::SocialScience;
  else if (text[0] == 'T')
    category = Category::Stem;
  else
    return std::nullopt;
  if (text[1] < '1' || text[1] > '9' || text[3] < '1' || text[3] > '9')
    return std::nullopt;
  int course = text[1] - '0';
  int period = text[3] - '0';
  int max_course = category == Category::SocialScience ? 4 : 3;
  if (course > max_course || period > 4) return std::nullopt;
  return SubsetKey{category, course, period};
}

}  // namespace walkbirch
