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

#include "muzzleprint/labels.hpp"

namespace muzzleprint {

namespace {

constexpr GunModelInfo kCatalog[] = {
    {"Glock 45", Caliber::k9mm, 24},
    {"Beretta 98 FS", Caliber::k9mm, 2},
    {"Beretta 92 FS", Caliber::k9mm, 11},
    {"Beretta PX4 Storm", Caliber::k9mm, 12},
    {"Glock 21", Caliber::k45Acp, 22},
    {"M&P Shield", Caliber::k45Acp, 27},
    {"Colt 1911", Caliber::k45Acp, 34},
    {"Walther PPQ", Caliber::k45Acp, 57},
    {"Glock 30S", Caliber::k45Acp, 23},
    {"S&W 629 4-inch", Caliber::k44Magnum, 5},
    {"S&W 629 TrailBoss", Caliber::k44Magnum, 6},
    {"S&W 629 Performance Center", Caliber::k44Magnum, 7},
    {"S&W 629-8", Caliber::k44Magnum, 47},
    {"S&W 69", Caliber::k44Magnum, 49},
    {"S&W 69 2.75-inch", Caliber::k44Magnum, 50},
    {"Charter Arms .44 Special Bulldog", Caliber::k44Magnum, 15},
    {"S&W Model 29 Dirty Harry", Caliber::k44Magnum, 21},
    {"S&W Model 29 4-inch", Caliber::k44Magnum, 32},
    {"Ruger Redhawk Big Game Hunt", Caliber::k44Magnum, 42},
    {"Ruger Super Black Hawk", Caliber::k44Magnum, 44},
    {"Ruger Red Hawk 8-shots", Caliber::k357Magnum, 41},
    {"S&W 357Magnum", Caliber::k357Magnum, 4},
    {"Chiappa Rhino", Caliber::k357Magnum, 16},
    {"Coonan 1911", Caliber::k357Magnum, 17},
    {"Ruger GP100 Match Champion", Caliber::k357Magnum, 38},
    {"Ruger SP101", Caliber::k357Magnum, 43},
    {"S&W Model 19 3-inch", Caliber::k357Magnum, 45},
    {"S&W Model 27", Caliber::k357Magnum, 46},
    {"S&W Model 66", Caliber::k357Magnum, 48},
    {"Dan Wesson Revolver", Caliber::k357Magnum, 19},
    {"CZ Bren 2 MS", Caliber::k762x39, 1},
    {"PWS MK107", Caliber::k762x39, 3},
    {"CZ 527", Caliber::k762x39, 13},
    {"Century Arms C39 AK-47", Caliber::k762x39, 14},
    {"Maadi AK47", Caliber::k762x39, 28},
    {"Micro Draco AK47 Pistol", Caliber::k762x39, 29},
    {"N-PAP AK", Caliber::k762x39, 33},
    {"Ruger American Ranch Rifle", Caliber::k762x39, 37},
    {"Ruger Mini 30", Caliber::k762x39, 40},
    {"SKS", Caliber::k762x39, 59},
    {"Daniel Defense M4 A1 SOCOM", Caliber::k556Nato, 20},
    {"Ruger AR", Caliber::k556Nato, 36},
    {"Ruger Mini-14", Caliber::k556Nato, 39},
    {"Ruger AR556 MPR", Caliber::k556Nato, 35},
    {"SIG 556 Classic SWAT Model", Caliber::k556Nato, 51},
    {"Springfield Armory Saint", Caliber::k556Nato, 54},
    {"Tactical Edge Warfighter", Caliber::k556Nato, 56},
    {"M&P 15 Sport II", Caliber::k556Nato, 26},
    {"Benelli M2 SBS", Caliber::k12Gauge, 8},
    {"Benelli M4", Caliber::k12Gauge, 9},
    {"Benelli Nova", Caliber::k12Gauge, 10},
    {"DP-12", Caliber::k12Gauge, 18},
    {"Kel-Tec SG12", Caliber::k12Gauge, 25},
    {"Winchester Model 12", Caliber::k12Gauge, 31},
    {"SRM 1216", Caliber::k12Gauge, 52},
    {"Serbu Super Shorty", Caliber::k12Gauge, 53},
    {"Standard Manufacturing SKO Shorty", Caliber::k12Gauge, 55},
    {"Winchester SXP Defender", Caliber::k12Gauge, 58},
    {"Winchester Model 12 SlugFest", Caliber::k12Gauge, 30},
};

}  // namespace

std::string_view to_string(Category category) {
  switch (category) {
    case Category::kPistol: return "Pistol";
    case Category::kRifle: return "Rifle";
    case Category::kShotgun: return "Shotgun";
  }
  return "";
}

std::string_view to_string(Caliber caliber) {
  switch (caliber) {
    case Caliber::k9mm: return "9mm";
    case Caliber::k45Acp: return ".45acp";
    case Caliber::k44Magnum: return ".44M";
    case Caliber::k357Magnum: return ".357M";
    case Caliber::k762x39: return "7.62x39";
    case Caliber::k556Nato: return "5.56NATO";
    case Caliber::k12Gauge: return "12";
  }
  return "";
}

std::optional<Category> parse_category(std::string_view text) {
  for (Category c : kAllCategories) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::optional<Caliber> parse_caliber(std::string_view text) {
  for (Caliber c : kAllCalibers) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

Category category_of(Caliber caliber) {
  switch (caliber) {
    case Caliber::k9mm:
    case Caliber::k45Acp:
    case Caliber::k44Magnum:
    case Caliber::k357Magnum:
      return Category::kPistol;
    case Caliber::k762x39:
    case Caliber::k556Nato:
      return Category::kRifle;
    case Caliber::k12Gauge:
      return Category::kShotgun;
  }
  return Category::kPistol;
}

std::span<const GunModelInfo> gun_catalog() { return kCatalog; }

}  // namespace muzzleprint
