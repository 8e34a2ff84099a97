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

#ifndef HALLSPAN_DETECTOR_H_
#define HALLSPAN_DETECTOR_H_

#include <vector>

#include "hallspan/datamodel.h"
#include "hallspan/embedding.h"
#include "hallspan/refiner.h"
#include "hallspan/scorer.h"
#include "hallspan/segmenter.h"

namespace hallspan {

// Everything about a record that depends only on windowing, matching and
// scoring parameters (w, t, tau, match cap, weights). Span selection
// parameters (lambda, MSL, BT, soft floor) are applied afterwards, so one
// analysis serves any number of them.
struct WindowAnalysis {
  TokenizedText tokens;
  std::vector<ComponentScores> windows;
};

// Throws ConfigError for an invalid config and MissingSamplesError when
// `samples` is empty.
WindowAnalysis AnalyzeRecord(const Record &record, const SampleSet &samples,
                             const DetectionConfig &config,
                             EmbeddingProvider &provider);

// Windows scoring above the threshold are refined and merged; the rest are
// kept as soft-only candidates. Returns the finalized PredictionSet.
PredictionSet SelectSpans(const Record &record, const WindowAnalysis &analysis,
                          const DetectionConfig &config);

PredictionSet DetectRecord(const Record &record, const SampleSet &samples,
                           const DetectionConfig &config,
                           EmbeddingProvider &provider);

}  // namespace hallspan

#endif  // HALLSPAN_DETECTOR_H_
