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

#include "hallspan/detector.h"

#include "hallspan/error.h"
#include "hallspan/matcher.h"

namespace hallspan {

WindowAnalysis AnalyzeRecord(const Record &record, const SampleSet &samples,
                             const DetectionConfig &config,
                             EmbeddingProvider &provider) {
  ValidateConfig(config);
  if (samples.samples.empty()) {
    throw MissingSamplesError("record " + record.id + " has no samples");
  }
  WindowAnalysis analysis;
  analysis.tokens = Tokenize(record.model_output_text, record.lang);
  const std::vector<WindowSpan> windows = EnumerateWindows(
      analysis.tokens, config.window_size, config.stride);
  const CandidatePool pool(SegmentSamples(samples, record.lang,
                                          config.window_size, config.stride));

  std::vector<MatchSet> matches;
  matches.reserve(windows.size());
  for (const WindowSpan &w : windows) {
    matches.push_back(FindMatches(w, pool, config.similarity_threshold,
                                  config.match_cap));
  }
  // F divides by the number of samples actually available.
  analysis.windows =
      ScoreWindows(matches, static_cast<int>(samples.samples.size()), config,
                   provider, record.id);
  return analysis;
}

PredictionSet SelectSpans(const Record &record, const WindowAnalysis &analysis,
                          const DetectionConfig &config) {
  std::vector<ScoredSpan> all;
  all.reserve(analysis.windows.size());
  for (const ComponentScores &s : analysis.windows) {
    all.push_back({s.window.start, s.window.end, s.combined});
  }
  const std::vector<double> profile =
      CharScoreProfile(analysis.tokens.length(), all);

  std::vector<ScoredSpan> detected, residual;
  for (const ScoredSpan &s : all) {
    if (s.score > config.score_threshold) {
      detected.push_back(s);
    } else if (s.score >= config.soft_floor) {
      residual.push_back(s);
    }
  }
  detected = RefineBoundaries(detected, analysis.tokens, profile,
                              config.boundary_threshold, config.window_size);
  std::vector<ScoredSpan> candidates = MergeOverlapping(detected);
  candidates.insert(candidates.end(), residual.begin(), residual.end());

  PredictionSet prediction = Finalize(candidates, config, analysis.tokens);
  prediction.id = record.id;
  prediction.lang = record.lang;
  return prediction;
}

PredictionSet DetectRecord(const Record &record, const SampleSet &samples,
                           const DetectionConfig &config,
                           EmbeddingProvider &provider) {
  return SelectSpans(record, AnalyzeRecord(record, samples, config, provider),
                     config);
}

}  // namespace hallspan
