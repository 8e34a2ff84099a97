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

#ifndef HALLSPAN_SCORER_H_
#define HALLSPAN_SCORER_H_

#include <span>
#include <string>
#include <vector>

#include "hallspan/datamodel.h"
#include "hallspan/embedding.h"
#include "hallspan/matcher.h"

namespace hallspan {

// Raw entropy (natural log) and its normalization to [0, 1].
struct Entropy {
  double raw = 0.0;
  double normalized = 0.0;
};

struct SemanticEntropy : Entropy {
  // Softmax over the matched set, one entry per match.
  std::vector<double> probabilities;
};

// Softmax of `similarities` (temperature 1) followed by Shannon entropy.
// Normalized by ln(k) for k >= 2 matches; a single match gives 0 and an
// empty set gives 1.
SemanticEntropy SemanticEntropyFromSimilarities(
    std::span<const double> similarities);

// Embeds the window and its matches in one batch, then applies
// SemanticEntropyFromSimilarities to the cosine similarities. Provider
// failures surface as ScoringError naming the window.
SemanticEntropy ComputeSemanticEntropy(const MatchSet &matches,
                                       EmbeddingProvider &provider);

// Shannon entropy of the canonical-text frequency distribution of the
// matched spans. Normalized by ln(#distinct); one distinct text gives 0 and
// an empty set gives 1.
Entropy ComputeLexicalEntropy(const MatchSet &matches);

// 1 - matched_sample_count / sample_count, clamped to [0, 1].
double FrequencyScore(const MatchSet &matches, int sample_count);

double CombinedScore(double semantic, double lexical, double frequency,
                     const DetectionConfig &config);

struct ComponentScores {
  WindowSpan window;
  double semantic_raw = 0.0;
  double semantic = 0.0;
  double lexical_raw = 0.0;
  double lexical = 0.0;
  double frequency = 0.0;
  double combined = 0.0;
};

// Scores every window of one record with a single provider call covering
// all window and match texts. `record_id` is used in error messages.
std::vector<ComponentScores> ScoreWindows(const std::vector<MatchSet> &windows,
                                          int sample_count,
                                          const DetectionConfig &config,
                                          EmbeddingProvider &provider,
                                          const std::string &record_id);

}  // namespace hallspan

#endif  // HALLSPAN_SCORER_H_
