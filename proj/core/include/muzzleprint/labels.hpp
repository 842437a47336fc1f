/* Copyright 2026 The Muzzleprint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef MUZZLEPRINT_LABELS_HPP_
#define MUZZLEPRINT_LABELS_HPP_

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace muzzleprint {

enum class Category { kPistol, kRifle, kShotgun };

enum class Caliber {
  k9mm,
  k45Acp,
  k44Magnum,
  k357Magnum,
  k762x39,
  k556Nato,
  k12Gauge,
};

inline constexpr std::array<Category, 3> kAllCategories = {
    Category::kPistol, Category::kRifle, Category::kShotgun};

inline constexpr std::array<Caliber, 7> kAllCalibers = {
    Caliber::k9mm,    Caliber::k45Acp,   Caliber::k44Magnum, Caliber::k357Magnum,
    Caliber::k762x39, Caliber::k556Nato, Caliber::k12Gauge};

// Canonical spellings: "Pistol", "Rifle", "Shotgun" and
// "9mm", ".45acp", ".44M", ".357M", "7.62x39", "5.56NATO", "12".
std::string_view to_string(Category category);
std::string_view to_string(Caliber caliber);
std::optional<Category> parse_category(std::string_view text);
std::optional<Caliber> parse_caliber(std::string_view text);

// Every caliber belongs to exactly one gun category.
Category category_of(Caliber caliber);

struct GunModelInfo {
  std::string_view name;
  Caliber caliber;
  int id;
};

// The 59 gun models of the reference corpus, grouped by caliber.
std::span<const GunModelInfo> gun_catalog();

}  // namespace muzzleprint

#endif  // MUZZLEPRINT_LABELS_HPP_
