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

#ifndef HALLSPAN_EVALUATOR_H_
#define HALLSPAN_EVALUATOR_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hallspan/datamodel.h"

namespace hallspan {

enum class CorrelationMethod { kSpearman, kPearson };

CorrelationMethod ParseCorrelationMethod(const std::string &name);

// Character-level intersection over union of two span lists on a text of
// `text_length` characters. Both empty gives 1. Throws MetricError (naming
// `record_id`) when a span leaves [0, text_length].
double CharIou(std::span<const CharSpan> predicted,
               std::span<const CharSpan> gold, int64_t text_length,
               const std::string &record_id = "");

// Per-character probability: max prob over covering spans, 0 elsewhere.
std::vector<double> CharProbabilities(std::span<const SoftSpan> spans,
                                      int64_t text_length,
                                      const std::string &record_id = "");

struct Correlation {
  bool defined = false;
  double value = 0.0;  // 0 when undefined
};

// Spearman (average ranks for ties) or Pearson correlation of two equally
// long vectors. Undefined when either vector is constant or empty.
Correlation Correlate(std::span<const double> x, std::span<const double> y,
                      CorrelationMethod method);

Correlation CharCorrelation(std::span<const SoftSpan> predicted,
                            std::span<const SoftSpan> gold,
                            int64_t text_length,
                            CorrelationMethod method =
                                CorrelationMethod::kSpearman,
                            const std::string &record_id = "");

PredictionSet MarkAll(const Record &record);
PredictionSet MarkNone(const Record &record);

struct RecordScore {
  std::string id;
  std::string lang;
  double iou = 0.0;
  Correlation cor;
};

struct LanguageSummary {
  std::string lang;
  size_t records = 0;
  double mean_iou = 0.0;
  // Mean over records with a defined correlation only.
  double mean_cor = 0.0;
  size_t cor_defined = 0;
};

struct EvalReport {
  std::vector<RecordScore> records;
  std::map<std::string, LanguageSummary> languages;
};

// Scores `predictions` against `gold`. Every gold id needs exactly one
// prediction and vice versa; otherwise MetricError lists the orphans of
// both sides. Records are reported in gold order; per-language means are
// folded in record-id order.
EvalReport Evaluate(std::span<const Record> gold,
                    std::span<const PredictionSet> predictions,
                    CorrelationMethod method = CorrelationMethod::kSpearman);

// One JSON object per record: id, lang, iou, cor, flags.
std::string ReportJsonl(const EvalReport &report);

// Plain-text table with one IoU/Cor column pair per language and one row per
// system, in the order given.
std::string SummaryTable(
    const std::vector<std::pair<std::string, EvalReport>> &systems);

}  // namespace hallspan

#endif  // HALLSPAN_EVALUATOR_H_
