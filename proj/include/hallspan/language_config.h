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

#ifndef HALLSPAN_LANGUAGE_CONFIG_H_
#define HALLSPAN_LANGUAGE_CONFIG_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hallspan/datamodel.h"

namespace hallspan {

struct LanguageConfig {
  std::string lang;
  DetectionConfig config;
  // Where the values came from: "tuned", "default table", or a note naming
  // the language they were borrowed from.
  std::string provenance;
};

// Built-in per-language defaults (w, t, lambda, MSL, BT) for the languages
// that had validation data. Unlisted languages borrow from a related one.
std::optional<DetectionConfig> TableConfig(const std::string &lang);

// Related tuned language used for languages without validation data,
// e.g. "ca" -> "es". Empty when no mapping exists.
std::string NearestTunedLanguage(const std::string &lang);

// Languages with built-in defaults, in canonical order.
const std::vector<std::string> &TableLanguages();

// Languages known to lack validation data.
const std::vector<std::string> &UntunedLanguages();

// Resolves the config for `lang`: the table row if present, otherwise the
// nearest language's row, otherwise English. Provenance says which.
LanguageConfig DefaultLanguageConfig(const std::string &lang);

// Per-language config file: one JSON object per line with "lang",
// DetectionConfig fields and "provenance".
class LanguageConfigTable {
 public:
  LanguageConfigTable() = default;

  static LanguageConfigTable Load(const std::string &path);
  std::string Serialize() const;

  void Set(LanguageConfig entry);
  bool Contains(const std::string &lang) const;

  // Entry for `lang`; falls back to DefaultLanguageConfig when absent.
  LanguageConfig Resolve(const std::string &lang) const;

  const std::map<std::string, LanguageConfig> &entries() const {
    return entries_;
  }

 private:
  std::map<std::string, LanguageConfig> entries_;
};

}  // namespace hallspan

#endif  // HALLSPAN_LANGUAGE_CONFIG_H_
