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

#ifndef HALLSPAN_REFINER_H_
#define HALLSPAN_REFINER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hallspan/datamodel.h"
#include "hallspan/segmenter.h"

namespace hallspan {

struct ScoredSpan {
  int64_t start = 0;
  int64_t end = 0;
  double score = 0.0;
  // Windows folded into this span by merging.
  int origin_count = 1;
  // Sum of the original lengths behind `score`; 0 means "use length()".
  double support = 0.0;

  int64_t length() const { return end - start; }
  double weight() const {
    return support > 0.0 ? support : static_cast<double>(length());
  }
  CharSpan range() const { return {start, end}; }
};

// Per-character score: max over the spans covering the character, 0 where
// nothing covers it.
std::vector<double> CharScoreProfile(int64_t text_length,
                                     std::span<const ScoredSpan> spans);

// Edge placement constraints derived from the token structure.
//
// Phrase-boundary characters are . , ; : ! ? and quotes/brackets when they
// sit in the leading or trailing punctuation run of a token (or form a token
// on their own); word-internal ones ("U.S", "3.5", "l'arte") do not count.
// Entity-like runs are maximal sequences of capitalized or digit-bearing
// tokens not separated by boundary punctuation; an edge may not fall
// strictly inside one.
class BoundaryModel {
 public:
  explicit BoundaryModel(const TokenizedText &text);

  bool IsPhraseBoundaryChar(int64_t position) const {
    return boundary_char_[position];
  }
  bool IsForbidden(int64_t position) const { return forbidden_[position]; }
  bool IsStartCandidate(int64_t position) const {
    return start_candidate_[position] && !forbidden_[position];
  }
  bool IsEndCandidate(int64_t position) const {
    return end_candidate_[position] && !forbidden_[position];
  }
  // True when [min(a, b), max(a, b)) holds a phrase-boundary character.
  bool Crosses(int64_t a, int64_t b) const;

  // Entity-like runs as character ranges [first core start, last core end).
  const std::vector<CharSpan> &entity_runs() const { return entity_runs_; }

 private:
  std::vector<bool> boundary_char_;
  std::vector<bool> start_candidate_;
  std::vector<bool> end_candidate_;
  std::vector<bool> forbidden_;
  std::vector<int64_t> boundary_prefix_;
  std::vector<CharSpan> entity_runs_;
};

// Moves each span edge (1) outward onto the nearest token or punctuation
// boundary, out of any entity-like run, then (2) to the position within
// ceil(boundary_threshold * window_size) tokens that maximizes
// |mean(left) - mean(right)| of `char_scores`, where each side covers that
// many tokens. Edges never cross a phrase-boundary character. Ties prefer
// the smaller move, then the earlier position. Spans that collapse are
// dropped.
std::vector<ScoredSpan> RefineBoundaries(std::span<const ScoredSpan> spans,
                                         const TokenizedText &text,
                                         std::span<const double> char_scores,
                                         double boundary_threshold,
                                         int window_size);

// Groups spans whose overlap is at least half the shorter one, repeating to
// a fixed point. Each group becomes its hull, scored by the length-weighted
// mean of the original (pre-merge) spans. Output is sorted by start.
std::vector<ScoredSpan> MergeOverlapping(std::span<const ScoredSpan> spans);

// Turns candidate spans into a PredictionSet. Remaining overlaps go to the
// higher-scoring span; pieces are trimmed of surrounding whitespace. Soft
// spans are the pieces scoring at least `soft_floor`; hard spans the pieces
// scoring strictly above `score_threshold` with at least `min_span_length`
// tokens.
PredictionSet Finalize(std::span<const ScoredSpan> spans,
                       const DetectionConfig &config,
                       const TokenizedText &text);

}  // namespace hallspan

#endif  // HALLSPAN_REFINER_H_
