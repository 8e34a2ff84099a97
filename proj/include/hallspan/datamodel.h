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

#ifndef HALLSPAN_DATAMODEL_H_
#define HALLSPAN_DATAMODEL_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hallspan {

// Half-open character range [start, end). Offsets count Unicode scalar
// values, never bytes.
struct CharSpan {
  int64_t start = 0;
  int64_t end = 0;

  int64_t length() const { return end - start; }
  auto operator<=>(const CharSpan &) const = default;
};

struct SoftSpan {
  int64_t start = 0;
  int64_t end = 0;
  double prob = 0.0;

  CharSpan range() const { return {start, end}; }
  bool operator==(const SoftSpan &) const = default;
};

// One task datapoint. Gold fields are empty lists on unlabeled splits;
// `has_gold` records whether the source line carried label fields at all.
struct Record {
  std::string id;
  std::string lang;
  std::string model_input;
  std::string model_output_text;
  std::vector<CharSpan> hard_labels;
  std::vector<SoftSpan> soft_labels;
  bool has_gold = false;
  std::optional<std::vector<std::string>> sample_texts;

  int64_t text_length() const;
  bool operator==(const Record &) const = default;
};

// Every tunable of the detector. Defaults are the English row of the
// per-language table with the fixed 0.4/0.4/0.2 component weights.
struct DetectionConfig {
  int window_size = 5;             // w, tokens
  int stride = 3;                  // t, tokens
  double similarity_threshold = 0.4;  // tau, strict
  double alpha = 0.4;              // semantic entropy weight
  double beta = 0.4;               // lexical entropy weight
  double gamma = 0.2;              // frequency weight
  double score_threshold = 0.5;    // lambda, strict
  int min_span_length = 3;         // MSL, tokens
  double boundary_threshold = 0.3;  // BT, fraction of w
  int sample_count = 20;           // n
  int match_cap = 1;               // retained matches per sample
  double soft_floor = 0.1;         // minimum prob of an emitted soft span

  bool operator==(const DetectionConfig &) const = default;
};

struct SampleProvenance {
  std::string endpoint;
  std::string model;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::string> downgrades;

  bool operator==(const SampleProvenance &) const = default;
};

struct SampleSet {
  std::vector<std::string> samples;
  SampleProvenance provenance;

  bool operator==(const SampleSet &) const = default;
};

// Predicted labels for one record. Spans in each list are sorted and
// pairwise disjoint; every hard span also appears (same range) as a soft span.
struct PredictionSet {
  std::string id;
  std::string lang;
  std::vector<CharSpan> hard_spans;
  std::vector<SoftSpan> soft_spans;

  bool operator==(const PredictionSet &) const = default;
};

// Parses one JSONL line. Throws ParseError for malformed JSON and
// ValidationError for out-of-range or ill-typed fields.
Record ParseRecord(std::string_view line);
std::string SerializeRecord(const Record &record);

std::string SerializePrediction(const PredictionSet &prediction);
PredictionSet ParsePrediction(std::string_view line);

// Checks the PredictionSet invariants; throws ValidationError.
void ValidatePrediction(const PredictionSet &prediction);

// Returns `config` unchanged, or throws ConfigError listing every violated
// invariant by field name.
DetectionConfig ValidateConfig(const DetectionConfig &config);

nlohmann::ordered_json ConfigToJson(const DetectionConfig &config);
// Fields absent from `json` keep the values of `base`.
DetectionConfig ConfigFromJson(const nlohmann::json &json,
                               const DetectionConfig &base = {});

// Line-oriented file helpers. Blank lines are skipped on read.
std::vector<std::string> ReadLines(const std::string &path);
// Writes via a temporary file and rename so readers never observe a
// partially written file.
void WriteFileAtomic(const std::string &path, const std::string &contents);

// Reads a JSONL record file. Records without an "id" get "<lang>-<line>".
// Parse and validation errors are rethrown prefixed with the line number.
std::vector<Record> ReadRecords(const std::string &path);
std::vector<PredictionSet> ReadPredictions(const std::string &path);

}  // namespace hallspan

#endif  // HALLSPAN_DATAMODEL_H_
