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

#include "hallspan/evaluator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>

#include "hallspan/error.h"
#include "json.hpp"

namespace hallspan {
namespace {

void CheckSpan(int64_t start, int64_t end, int64_t length,
               const std::string &record_id) {
  if (start < 0 || start > end || end > length) {
    throw MetricError("record " + (record_id.empty() ? "?" : record_id) +
                      ": span (" + std::to_string(start) + ", " +
                      std::to_string(end) + ") outside text of length " +
                      std::to_string(length));
  }
}

std::vector<bool> Cover(std::span<const CharSpan> spans, int64_t length,
                        const std::string &record_id) {
  std::vector<bool> covered(length, false);
  for (const CharSpan &s : spans) {
    CheckSpan(s.start, s.end, length, record_id);
    for (int64_t i = s.start; i < s.end; ++i) covered[i] = true;
  }
  return covered;
}

std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

Correlation Pearson(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return {};
  return {true, std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0)};
}

bool Constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) ==
         v.end();
}

std::string FormatScore(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

CorrelationMethod ParseCorrelationMethod(const std::string &name) {
  if (name == "spearman") return CorrelationMethod::kSpearman;
  if (name == "pearson") return CorrelationMethod::kPearson;
  throw ConfigError("unknown correlation method '" + name +
                    "' (expected spearman or pearson)");
}

double CharIou(std::span<const CharSpan> predicted,
               std::span<const CharSpan> gold, int64_t text_length,
               const std::string &record_id) {
  std::vector<bool> p = Cover(predicted, text_length, record_id);
  std::vector<bool> g = Cover(gold, text_length, record_id);
  size_t inter = 0, uni = 0;
  for (int64_t i = 0; i < text_length; ++i) {
    inter += p[i] && g[i];
    uni += p[i] || g[i];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<double> CharProbabilities(std::span<const SoftSpan> spans,
                                      int64_t text_length,
                                      const std::string &record_id) {
  std::vector<double> probs(text_length, 0.0);
  for (const SoftSpan &s : spans) {
    CheckSpan(s.start, s.end, text_length, record_id);
    for (int64_t i = s.start; i < s.end; ++i) {
      probs[i] = std::max(probs[i], s.prob);
    }
  }
  return probs;
}

Correlation Correlate(std::span<const double> x, std::span<const double> y,
                      CorrelationMethod method) {
  if (x.size() != y.size()) {
    throw MetricError("correlation of vectors with different lengths");
  }
  if (x.empty() || Constant(x) || Constant(y)) return {};
  if (method == CorrelationMethod::kPearson) return Pearson(x, y);
  std::vector<double> rx = AverageRanks(x), ry = AverageRanks(y);
  return Pearson(rx, ry);
}

Correlation CharCorrelation(std::span<const SoftSpan> predicted,
                            std::span<const SoftSpan> gold,
                            int64_t text_length, CorrelationMethod method,
                            const std::string &record_id) {
  std::vector<double> p = CharProbabilities(predicted, text_length, record_id);
  std::vector<double> g = CharProbabilities(gold, text_length, record_id);
  return Correlate(p, g, method);
}

PredictionSet MarkAll(const Record &record) {
  PredictionSet p;
  p.id = record.id;
  p.lang = record.lang;
  int64_t length = record.text_length();
  if (length > 0) {
    p.hard_spans.push_back({0, length});
    p.soft_spans.push_back({0, length, 1.0});
  }
  return p;
}

PredictionSet MarkNone(const Record &record) {
  PredictionSet p;
  p.id = record.id;
  p.lang = record.lang;
  return p;
}

EvalReport Evaluate(std::span<const Record> gold,
                    std::span<const PredictionSet> predictions,
                    CorrelationMethod method) {
  std::unordered_map<std::string, const PredictionSet *> by_id;
  std::vector<std::string> duplicates;
  for (const PredictionSet &p : predictions) {
    if (!by_id.emplace(p.id, &p).second) duplicates.push_back(p.id);
  }
  std::set<std::string> gold_ids;
  std::vector<std::string> missing;
  for (const Record &r : gold) {
    gold_ids.insert(r.id);
    if (!by_id.count(r.id)) missing.push_back(r.id);
  }
  std::vector<std::string> orphans;
  for (const PredictionSet &p : predictions) {
    if (!gold_ids.count(p.id)) orphans.push_back(p.id);
  }
  if (!missing.empty() || !orphans.empty() || !duplicates.empty()) {
    auto join = [](const std::vector<std::string> &ids) {
      std::string s;
      for (const auto &id : ids) s += (s.empty() ? "" : ", ") + id;
      return s.empty() ? std::string("none") : s;
    };
    throw MetricError("prediction/gold id mismatch; gold without prediction: " +
                      join(missing) + "; predictions without gold: " +
                      join(orphans) + "; duplicate predictions: " +
                      join(duplicates));
  }

  EvalReport report;
  for (const Record &r : gold) {
    const PredictionSet &p = *by_id.at(r.id);
    RecordScore score;
    score.id = r.id;
    score.lang = r.lang;
    int64_t length = r.text_length();
    score.iou = CharIou(p.hard_spans, r.hard_labels, length, r.id);
    score.cor = CharCorrelation(p.soft_spans, r.soft_labels, length, method,
                                r.id);
    report.records.push_back(std::move(score));
  }

  std::vector<const RecordScore *> ordered;
  for (const RecordScore &s : report.records) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const RecordScore *a, const RecordScore *b) {
                     return a->id < b->id;
                   });
  for (const RecordScore *s : ordered) {
    LanguageSummary &summary = report.languages[s->lang];
    summary.lang = s->lang;
    ++summary.records;
    summary.mean_iou += s->iou;
    if (s->cor.defined) {
      ++summary.cor_defined;
      summary.mean_cor += s->cor.value;
    }
  }
  for (auto &[lang, summary] : report.languages) {
    summary.mean_iou /= static_cast<double>(summary.records);
    if (summary.cor_defined > 0) {
      summary.mean_cor /= static_cast<double>(summary.cor_defined);
    }
  }
  return report;
}

std::string ReportJsonl(const EvalReport &report) {
  std::string out;
  for (const RecordScore &s : report.records) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["lang"] = s.lang;
    j["iou"] = s.iou;
    j["cor"] = s.cor.value;
    j["flags"] = nlohmann::ordered_json::array();
    if (!s.cor.defined) j["flags"].push_back("cor_undefined");
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string SummaryTable(
    const std::vector<std::pair<std::string, EvalReport>> &systems) {
  std::set<std::string> langs;
  for (const auto &[name, report] : systems) {
    for (const auto &[lang, summary] : report.languages) langs.insert(lang);
  }
  size_t name_width = 8;
  for (const auto &[name, report] : systems) {
    name_width = std::max(name_width, name.size());
  }
  auto pad = [](std::string s, size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  constexpr size_t kCell = 8;

  std::string out = pad("Language", name_width);
  for (const std::string &lang : langs) out += " | " + pad(lang, 2 * kCell + 1);
  out += "\n" + pad("System", name_width);
  for (size_t i = 0; i < langs.size(); ++i) {
    out += " | " + pad("IoU", kCell) + " " + pad("Cor", kCell);
  }
  out += "\n" + std::string(name_width, '-');
  for (size_t i = 0; i < langs.size(); ++i) {
    out += "-+-" + std::string(2 * kCell + 1, '-');
  }
  out += "\n";
  for (const auto &[name, report] : systems) {
    out += pad(name, name_width);
    for (const std::string &lang : langs) {
      auto it = report.languages.find(lang);
      if (it == report.languages.end()) {
        out += " | " + pad("-", kCell) + " " + pad("-", kCell);
        continue;
      }
      const LanguageSummary &s = it->second;
      out += " | " + pad(FormatScore(s.mean_iou), kCell) + " " +
             pad(s.cor_defined ? FormatScore(s.mean_cor) : "n/a", kCell);
    }
    out += "\n";
  }
  return out;
}

}  // namespace hallspan
