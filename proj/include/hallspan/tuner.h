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

#ifndef HALLSPAN_TUNER_H_
#define HALLSPAN_TUNER_H_

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hallspan/datamodel.h"
#include "hallspan/embedding.h"
#include "hallspan/evaluator.h"
#include "hallspan/language_config.h"

namespace hallspan {

enum class TuningObjective { kIou, kCor, kWeighted };

struct GridSpec {
  std::vector<int> window_sizes = {3, 4, 5, 6, 7, 8};
  std::vector<int> strides = {1, 2, 3, 4};
  std::vector<double> score_thresholds = {0.4, 0.5, 0.6, 0.7};
  std::vector<int> min_span_lengths = {2, 3, 4};
  std::vector<double> boundary_thresholds = {0.2, 0.3, 0.4};
  // Opt-in: (alpha, beta, gamma) triples. Empty keeps the base weights.
  std::vector<std::array<double, 3>> weights;
  TuningObjective objective = TuningObjective::kIou;
  // Weight of IoU in the weighted objective; Cor gets the remainder.
  double iou_weight = 0.5;
  CorrelationMethod correlation = CorrelationMethod::kSpearman;
  // Restricts tuning to records of this language when non-empty.
  std::string lang;
};

// Reads a grid from JSON: keys window_size, stride, score_threshold,
// min_span_length, boundary_threshold, weights, objective
// ("iou" | "cor" | "weighted"), iou_weight, lang. Missing keys keep defaults.
GridSpec GridFromJson(const nlohmann::json &json);

// Valid configs of the grid in canonical order (w, t, lambda, MSL, BT,
// weights), each built on `base`. Pairs with t > w are skipped.
std::vector<DetectionConfig> ExpandGrid(const GridSpec &grid,
                                        const DetectionConfig &base);

struct GridResult {
  DetectionConfig config;
  double objective = 0.0;
  double mean_iou = 0.0;
  double mean_cor = 0.0;
};

// Evaluates every grid point with the full detection pipeline and returns
// them best first. Ties go to smaller w, then smaller t, then larger lambda,
// then canonical grid order. Window analyses are shared between grid points
// that differ only in lambda, MSL or BT. Throws ConfigError for an empty
// grid, ValidationError listing records without gold labels, and
// MissingSamplesError listing records without samples.
std::vector<GridResult> GridSearch(
    std::span<const Record> records,
    const std::map<std::string, SampleSet> &samples, const GridSpec &grid,
    const DetectionConfig &base, EmbeddingProvider &provider, int jobs = 1);

// Objective of one config computed from scratch (detect + evaluate).
GridResult EvaluateConfig(std::span<const Record> records,
                          const std::map<std::string, SampleSet> &samples,
                          const DetectionConfig &config,
                          const GridSpec &grid, EmbeddingProvider &provider);

// Adds entries for languages without validation data by copying the nearest
// tuned language (from `tuned` when present, else the built-in table).
void FillUntunedLanguages(LanguageConfigTable &tuned);

// Leaderboard text: one row per language with w, t, lambda, MSL, BT and the
// objective value.
std::string TunedTable(const LanguageConfigTable &table,
                       const std::map<std::string, GridResult> &best);

}  // namespace hallspan

#endif  // HALLSPAN_TUNER_H_
