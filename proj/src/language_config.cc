// Copyright 2026 The Hallspan Authors.
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

#include "hallspan/language_config.h"

#include "hallspan/error.h"

namespace hallspan {
namespace {

struct TableRow {
  const char *lang;
  int window_size;
  int stride;
  double score_threshold;
  int min_span_length;
  double boundary_threshold;
};

constexpr TableRow kTable[] = {
    {"ar", 4, 2, 0.6, 3, 0.3}, {"de", 4, 2, 0.6, 3, 0.3},
    {"en", 5, 3, 0.5, 3, 0.3}, {"es", 4, 2, 0.6, 3, 0.3},
    {"fi", 4, 3, 0.6, 3, 0.3}, {"fr", 4, 2, 0.6, 3, 0.3},
    {"hi", 5, 2, 0.6, 3, 0.3}, {"it", 4, 2, 0.7, 3, 0.3},
    {"sv", 4, 2, 0.5, 3, 0.3}, {"zh", 7, 3, 0.6, 3, 0.3},
};

// Languages without validation data borrow from a close relative: Catalan
// and Basque from Spanish, Czech from German, Farsi from Arabic (script).
const std::map<std::string, std::string> &NearestMap() {
  static const auto *map = new std::map<std::string, std::string>{
      {"ca", "es"}, {"eu", "es"}, {"cs", "de"}, {"fa", "ar"}};
  return *map;
}

}  // namespace

std::optional<DetectionConfig> TableConfig(const std::string &lang) {
  for (const TableRow &row : kTable) {
    if (lang == row.lang) {
      DetectionConfig c;
      c.window_size = row.window_size;
      c.stride = row.stride;
      c.score_threshold = row.score_threshold;
      c.min_span_length = row.min_span_length;
      c.boundary_threshold = row.boundary_threshold;
      return c;
    }
  }
  return std::nullopt;
}

std::string NearestTunedLanguage(const std::string &lang) {
  auto it = NearestMap().find(lang);
  return it == NearestMap().end() ? "" : it->second;
}

const std::vector<std::string> &TableLanguages() {
  static const auto *langs = [] {
    auto *v = new std::vector<std::string>;
    for (const TableRow &row : kTable) v->push_back(row.lang);
    return v;
  }();
  return *langs;
}

const std::vector<std::string> &UntunedLanguages() {
  static const auto *langs =
      new std::vector<std::string>{"ca", "cs", "eu", "fa"};
  return *langs;
}

LanguageConfig DefaultLanguageConfig(const std::string &lang) {
  if (auto c = TableConfig(lang)) return {lang, *c, "default table"};
  // Region subtags ("zh-CN") fall back to the primary language.
  if (size_t dash = lang.find('-'); dash != std::string::npos && dash > 0) {
    LanguageConfig base = DefaultLanguageConfig(lang.substr(0, dash));
    base.lang = lang;
    return base;
  }
  std::string nearest = NearestTunedLanguage(lang);
  if (!nearest.empty()) {
    return {lang, *TableConfig(nearest),
            "approximated from " + nearest + " (no validation data)"};
  }
  return {lang, *TableConfig("en"), "approximated from en (unknown language)"};
}

LanguageConfigTable LanguageConfigTable::Load(const std::string &path) {
  LanguageConfigTable table;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error &e) {
      throw ParseError(path + ":" + std::to_string(i + 1) +
                           ": malformed JSON at byte offset " +
                           std::to_string(e.byte),
                       e.byte);
    }
    if (!j.is_object() || !j.contains("lang") || !j["lang"].is_string()) {
      throw ConfigError(path + ":" + std::to_string(i + 1) +
                        ": config line needs a string \"lang\"");
    }
    LanguageConfig entry;
    entry.lang = j["lang"].get<std::string>();
    // Missing fields inherit the language's defaults.
    entry.config = ValidateConfig(
        ConfigFromJson(j, DefaultLanguageConfig(entry.lang).config));
    entry.provenance = j.value("provenance", std::string("config file"));
    table.Set(std::move(entry));
  }
  return table;
}

std::string LanguageConfigTable::Serialize() const {
  std::string out;
  for (const auto &[lang, entry] : entries_) {
    nlohmann::ordered_json j;
    j["lang"] = lang;
    const nlohmann::ordered_json config = ConfigToJson(entry.config);
    for (const auto &[key, value] : config.items()) {
      j[key] = value;
    }
    j["provenance"] = entry.provenance;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void LanguageConfigTable::Set(LanguageConfig entry) {
  std::string lang = entry.lang;
  entries_[lang] = std::move(entry);
}

bool LanguageConfigTable::Contains(const std::string &lang) const {
  return entries_.count(lang) > 0;
}

LanguageConfig LanguageConfigTable::Resolve(const std::string &lang) const {
  auto it = entries_.find(lang);
  if (it != entries_.end()) return it->second;
  return DefaultLanguageConfig(lang);
}

}  // namespace hallspan
