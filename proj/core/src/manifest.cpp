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

#include "muzzleprint/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "muzzleprint/error.hpp"

namespace muzzleprint {

namespace {

using nlohmann::json;

[[noreturn]] void fail_line(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kValidation,
              "manifest line " + std::to_string(line) + ": " + why);
}

std::string required_string(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    fail_line(line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<ManifestEntry> load_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::map<int, std::string> model_by_id;
  std::map<std::string, int> id_by_model;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                      : nl - pos);
    ++line_no;
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_line(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_line(line_no, "expected a JSON object");

    ManifestEntry entry;
    entry.line = line_no;
    entry.path = required_string(obj, "path", line_no);
    entry.gun_model = required_string(obj, "gun_model", line_no);
    const std::string caliber = required_string(obj, "caliber", line_no);
    const std::string category = required_string(obj, "category", line_no);
    const auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_number_integer()) {
      fail_line(line_no, "field 'id' must be an integer");
    }
    entry.id = id_it->get<int>();

    const auto cal = parse_caliber(caliber);
    if (!cal) fail_line(line_no, "unknown caliber '" + caliber + "'");
    const auto cat = parse_category(category);
    if (!cat) fail_line(line_no, "unknown category '" + category + "'");
    if (category_of(*cal) != *cat) {
      fail_line(line_no, "caliber " + caliber + " belongs to category " +
                             std::string(to_string(category_of(*cal))) +
                             ", not " + category);
    }
    entry.caliber = *cal;
    entry.category = *cat;

    if (const auto it = model_by_id.find(entry.id);
        it != model_by_id.end() && it->second != entry.gun_model) {
      throw Error(ErrorCode::kConflict,
                  "manifest line " + std::to_string(line_no) + ": id " +
                      std::to_string(entry.id) + " already names '" +
                      it->second + "'");
    }
    if (const auto it = id_by_model.find(entry.gun_model);
        it != id_by_model.end() && it->second != entry.id) {
      throw Error(ErrorCode::kConflict,
                  "manifest line " + std::to_string(line_no) + ": model '" +
                      entry.gun_model + "' already has id " +
                      std::to_string(it->second));
    }
    model_by_id[entry.id] = entry.gun_model;
    id_by_model[entry.gun_model] = entry.id;
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFile, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_manifest(buf.str());
}

std::string to_json_line(const ManifestEntry& entry) {
  json obj = {{"path", entry.path},
              {"gun_model", entry.gun_model},
              {"caliber", to_string(entry.caliber)},
              {"category", to_string(entry.category)},
              {"id", entry.id}};
  return obj.dump();
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::kCategory: return "category";
    case Task::kCaliber: return "caliber";
    case Task::kModel: return "model";
  }
  return "";
}

Task parse_task(std::string_view text) {
  for (Task t : {Task::kCategory, Task::kCaliber, Task::kModel}) {
    if (to_string(t) == text) return t;
  }
  throw Error(ErrorCode::kArgument, "unknown task '" + std::string(text) + "'");
}

TaskLabels::TaskLabels(Task task, const std::vector<ManifestEntry>& entries)
    : task_(task) {
  switch (task) {
    case Task::kCategory:
      for (Category c : kAllCategories) names_.emplace_back(to_string(c));
      break;
    case Task::kCaliber:
      for (Caliber c : kAllCalibers) names_.emplace_back(to_string(c));
      break;
    case Task::kModel: {
      std::map<int, std::string> by_id;
      for (const auto& e : entries) by_id.emplace(e.id, e.gun_model);
      for (const auto& [id, name] : by_id) names_.push_back(name);
      break;
    }
  }
}

TaskLabels::TaskLabels(Task task, std::vector<std::string> class_names)
    : task_(task), names_(std::move(class_names)) {}

std::size_t TaskLabels::class_of(const ManifestEntry& entry) const {
  std::string label;
  switch (task_) {
    case Task::kCategory: label = to_string(entry.category); break;
    case Task::kCaliber: label = to_string(entry.caliber); break;
    case Task::kModel: label = entry.gun_model; break;
  }
  const auto it = std::find(names_.begin(), names_.end(), label);
  if (it == names_.end()) {
    throw Error(ErrorCode::kValidation,
                "label '" + label + "' is not a class of the " +
                    std::string(to_string(task_)) + " task");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

}  // namespace muzzleprint
