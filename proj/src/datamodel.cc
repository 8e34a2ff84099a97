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

#include "hallspan/datamodel.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "hallspan/error.h"
#include "hallspan/utf8.h"

namespace hallspan {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json ParseJson(std::string_view line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error &e) {
    throw ParseError("malformed JSON at byte offset " +
                         std::to_string(e.byte) + ": " + e.what(),
                     e.byte);
  }
}

std::string Field(std::string_view name, size_t index) {
  return std::string(name) + "[" + std::to_string(index) + "]";
}

int64_t GetOffset(const json &value, const std::string &where) {
  if (!value.is_number_integer()) {
    // Some exports write offsets as floats; accept integral values only.
    if (value.is_number_float()) {
      double d = value.get<double>();
      if (std::floor(d) == d) return static_cast<int64_t>(d);
    }
    throw ValidationError(where + ": offset is not an integer");
  }
  return value.get<int64_t>();
}

std::string GetString(const json &object, const char *key, bool required) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) {
    if (required) {
      throw ValidationError(std::string("missing required field '") + key +
                            "'");
    }
    return "";
  }
  if (!it->is_string()) {
    throw ValidationError(std::string("field '") + key + "' is not a string");
  }
  return it->get<std::string>();
}

void CheckRange(const CharSpan &span, int64_t length,
                const std::string &where) {
  if (span.start < 0 || span.start >= span.end || span.end > length) {
    throw ValidationError(where + ": span (" + std::to_string(span.start) +
                          ", " + std::to_string(span.end) +
                          ") violates 0 <= start < end <= " +
                          std::to_string(length));
  }
}

void CheckProb(double prob, const std::string &where) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw ValidationError(where + ": prob " + std::to_string(prob) +
                          " outside [0, 1]");
  }
}

std::vector<CharSpan> ParseHardLabels(const json &value, int64_t length) {
  std::vector<CharSpan> spans;
  if (value.is_null()) return spans;
  if (!value.is_array()) throw ValidationError("hard_labels: not a list");
  for (size_t i = 0; i < value.size(); ++i) {
    const json &pair = value[i];
    std::string where = Field("hard_labels", i);
    if (!pair.is_array() || pair.size() != 2) {
      throw ValidationError(where + ": expected [start, end]");
    }
    CharSpan span{GetOffset(pair[0], where), GetOffset(pair[1], where)};
    CheckRange(span, length, where);
    spans.push_back(span);
  }
  return spans;
}

std::vector<SoftSpan> ParseSoftLabels(const json &value, int64_t length) {
  std::vector<SoftSpan> spans;
  if (value.is_null()) return spans;
  if (!value.is_array()) throw ValidationError("soft_labels: not a list");
  for (size_t i = 0; i < value.size(); ++i) {
    const json &item = value[i];
    std::string where = Field("soft_labels", i);
    if (!item.is_object() || !item.contains("start") || !item.contains("end") ||
        !item.contains("prob")) {
      throw ValidationError(where + ": expected {start, end, prob}");
    }
    if (!item["prob"].is_number()) {
      throw ValidationError(where + ": prob is not a number");
    }
    SoftSpan span{GetOffset(item["start"], where),
                  GetOffset(item["end"], where), item["prob"].get<double>()};
    CheckRange(span.range(), length, where);
    CheckProb(span.prob, where);
    spans.push_back(span);
  }
  return spans;
}

ordered_json HardToJson(const std::vector<CharSpan> &spans) {
  ordered_json out = ordered_json::array();
  for (const CharSpan &s : spans) out.push_back({s.start, s.end});
  return out;
}

ordered_json SoftToJson(const std::vector<SoftSpan> &spans) {
  ordered_json out = ordered_json::array();
  for (const SoftSpan &s : spans) {
    ordered_json item;
    item["start"] = s.start;
    item["end"] = s.end;
    item["prob"] = s.prob;
    out.push_back(std::move(item));
  }
  return out;
}

const json &Require(const json &object, const char *key) {
  static const json kNull;
  auto it = object.find(key);
  return it == object.end() ? kNull : *it;
}

}  // namespace

int64_t Record::text_length() const {
  return static_cast<int64_t>(utf8::Length(model_output_text));
}

Record ParseRecord(std::string_view line) {
  json object = ParseJson(line);
  if (!object.is_object()) throw ValidationError("record is not an object");

  Record record;
  record.id = GetString(object, "id", false);
  record.lang = GetString(object, "lang", true);
  record.model_input = GetString(object, "model_input", false);
  record.model_output_text = GetString(object, "model_output_text", true);
  int64_t length = record.text_length();

  record.has_gold = object.contains("hard_labels") ||
                    object.contains("soft_labels");
  record.hard_labels = ParseHardLabels(Require(object, "hard_labels"), length);
  record.soft_labels = ParseSoftLabels(Require(object, "soft_labels"), length);

  if (auto it = object.find("sample_texts");
      it != object.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("sample_texts: not a list");
    std::vector<std::string> samples;
    for (size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) {
        throw ValidationError(Field("sample_texts", i) + ": not a string");
      }
      samples.push_back((*it)[i].get<std::string>());
    }
    record.sample_texts = std::move(samples);
  }
  return record;
}

std::string SerializeRecord(const Record &record) {
  ordered_json out;
  if (!record.id.empty()) out["id"] = record.id;
  out["lang"] = record.lang;
  out["model_input"] = record.model_input;
  out["model_output_text"] = record.model_output_text;
  if (record.has_gold) {
    out["hard_labels"] = HardToJson(record.hard_labels);
    out["soft_labels"] = SoftToJson(record.soft_labels);
  }
  if (record.sample_texts) out["sample_texts"] = *record.sample_texts;
  return out.dump();
}

std::string SerializePrediction(const PredictionSet &prediction) {
  ordered_json out;
  out["id"] = prediction.id;
  if (!prediction.lang.empty()) out["lang"] = prediction.lang;
  out["hard_labels"] = HardToJson(prediction.hard_spans);
  out["soft_labels"] = SoftToJson(prediction.soft_spans);
  return out.dump();
}

PredictionSet ParsePrediction(std::string_view line) {
  json object = ParseJson(line);
  if (!object.is_object()) throw ValidationError("prediction is not an object");
  PredictionSet prediction;
  prediction.id = GetString(object, "id", true);
  prediction.lang = GetString(object, "lang", false);
  // Bounds against the text are checked by the evaluator, which has it.
  constexpr int64_t kUnbounded = INT64_MAX;
  prediction.hard_spans =
      ParseHardLabels(Require(object, "hard_labels"), kUnbounded);
  prediction.soft_spans =
      ParseSoftLabels(Require(object, "soft_labels"), kUnbounded);
  return prediction;
}

void ValidatePrediction(const PredictionSet &prediction) {
  auto check_sorted = [&](const auto &spans, const char *name) {
    for (size_t i = 0; i < spans.size(); ++i) {
      if (spans[i].start < 0 || spans[i].start >= spans[i].end) {
        throw ValidationError(Field(name, i) + ": empty or negative span");
      }
      if (i > 0 && spans[i].start < spans[i - 1].end) {
        throw ValidationError(Field(name, i) +
                              ": overlaps or precedes previous span");
      }
    }
  };
  check_sorted(prediction.hard_spans, "hard_spans");
  check_sorted(prediction.soft_spans, "soft_spans");
  for (size_t i = 0; i < prediction.soft_spans.size(); ++i) {
    CheckProb(prediction.soft_spans[i].prob, Field("soft_spans", i));
  }
  for (size_t i = 0; i < prediction.hard_spans.size(); ++i) {
    const CharSpan &hard = prediction.hard_spans[i];
    bool found = false;
    for (const SoftSpan &soft : prediction.soft_spans) {
      if (soft.range() == hard) found = true;
    }
    if (!found) {
      throw ValidationError(Field("hard_spans", i) +
                            ": no soft span with the same range");
    }
  }
}

DetectionConfig ValidateConfig(const DetectionConfig &c) {
  std::vector<std::string> problems;
  auto require = [&](bool ok, const std::string &message) {
    if (!ok) problems.push_back(message);
  };
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  require(c.window_size >= 1, "window_size must be a positive integer");
  require(c.stride >= 1, "stride must be a positive integer");
  require(c.stride <= c.window_size, "stride (" + std::to_string(c.stride) +
                                         ") exceeds window_size (" +
                                         std::to_string(c.window_size) + ")");
  require(unit(c.similarity_threshold), "similarity_threshold outside [0, 1]");
  require(c.alpha >= 0.0, "alpha must be >= 0");
  require(c.beta >= 0.0, "beta must be >= 0");
  require(c.gamma >= 0.0, "gamma must be >= 0");
  double sum = c.alpha + c.beta + c.gamma;
  if (std::fabs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha + beta + gamma must equal 1 (got " << sum << ")";
    problems.push_back(os.str());
  }
  require(unit(c.score_threshold), "score_threshold outside [0, 1]");
  require(c.min_span_length >= 1, "min_span_length must be a positive integer");
  require(unit(c.boundary_threshold), "boundary_threshold outside [0, 1]");
  require(c.sample_count >= 1, "sample_count must be a positive integer");
  require(c.match_cap >= 1, "match_cap must be a positive integer");
  require(unit(c.soft_floor), "soft_floor outside [0, 1]");
  if (!problems.empty()) {
    std::string message = "invalid detection config:";
    for (const std::string &p : problems) message += "\n  " + p;
    throw ConfigError(message);
  }
  return c;
}

nlohmann::ordered_json ConfigToJson(const DetectionConfig &c) {
  ordered_json out;
  out["window_size"] = c.window_size;
  out["stride"] = c.stride;
  out["similarity_threshold"] = c.similarity_threshold;
  out["alpha"] = c.alpha;
  out["beta"] = c.beta;
  out["gamma"] = c.gamma;
  out["score_threshold"] = c.score_threshold;
  out["min_span_length"] = c.min_span_length;
  out["boundary_threshold"] = c.boundary_threshold;
  out["sample_count"] = c.sample_count;
  out["match_cap"] = c.match_cap;
  out["soft_floor"] = c.soft_floor;
  return out;
}

DetectionConfig ConfigFromJson(const nlohmann::json &j,
                               const DetectionConfig &base) {
  DetectionConfig c = base;
  auto read = [&](const char *key, auto &field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
      it->get_to(field);
    } catch (const nlohmann::json::exception &) {
      throw ConfigError(std::string("config field '") + key +
                        "' has the wrong type");
    }
  };
  read("window_size", c.window_size);
  read("stride", c.stride);
  read("similarity_threshold", c.similarity_threshold);
  read("alpha", c.alpha);
  read("beta", c.beta);
  read("gamma", c.gamma);
  read("score_threshold", c.score_threshold);
  read("min_span_length", c.min_span_length);
  read("boundary_threshold", c.boundary_threshold);
  read("sample_count", c.sample_count);
  read("match_cap", c.match_cap);
  read("soft_floor", c.soft_floor);
  return c;
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

void WriteFileAtomic(const std::string &path, const std::string &contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  // Unique per writer so concurrent writers never share a temp file.
  std::ostringstream suffix;
  suffix << ".tmp." << ::getpid() << "." << std::hex
         << std::hash<std::thread::id>{}(std::this_thread::get_id());
  fs::path temp = target;
  temp += suffix.str();
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + temp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + temp.string());
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp);
    throw Error("cannot rename " + temp.string() + " to " + path + ": " +
                ec.message());
  }
}

std::vector<Record> ReadRecords(const std::string &path) {
  std::vector<Record> records;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    try {
      Record record = ParseRecord(lines[i]);
      if (record.id.empty()) {
        record.id = record.lang + "-" + std::to_string(i + 1);
      }
      records.push_back(std::move(record));
    } catch (const ParseError &e) {
      throw ParseError(path + ":" + std::to_string(i + 1) + ": " + e.what(),
                       e.byte_offset());
    } catch (const ValidationError &e) {
      throw ValidationError(path + ":" + std::to_string(i + 1) + ": " +
                            e.what());
    }
  }
  return records;
}

std::vector<PredictionSet> ReadPredictions(const std::string &path) {
  std::vector<PredictionSet> predictions;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    try {
      predictions.push_back(ParsePrediction(lines[i]));
    } catch (const ParseError &e) {
      throw ParseError(path + ":" + std::to_string(i + 1) + ": " + e.what(),
                       e.byte_offset());
    } catch (const ValidationError &e) {
      throw ValidationError(path + ":" + std::to_string(i + 1) + ": " +
                            e.what());
    }
  }
  return predictions;
}

}  // namespace hallspan
