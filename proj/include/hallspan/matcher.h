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

#ifndef HALLSPAN_MATCHER_H_
#define HALLSPAN_MATCHER_H_

#include <string>
#include <string_view>
#include <vector>

#include "hallspan/segmenter.h"

namespace hallspan {

// Gestalt (Ratcliff/Obershelp) matching: the longest common block is taken,
// preferring the earliest start in `a` and then in `b`, and the procedure
// recurses on the unmatched left and right remainders. Returns the total
// number of matched characters.
size_t MatchingCharacters(std::u32string_view a, std::u32string_view b);

// 2 * M / (|a| + |b|) over case-folded character sequences; two empty
// strings have similarity 1.
double SequenceSimilarity(std::string_view a, std::string_view b);
double FoldedSimilarity(std::u32string_view a, std::u32string_view b);

struct Match {
  size_t sample_index = 0;
  WindowSpan span;
  double similarity = 0.0;
};

struct MatchSet {
  WindowSpan source;
  // Sorted by (sample_index, span.start).
  std::vector<Match> matches;
  // Distinct sample indices among `matches`.
  size_t matched_sample_count = 0;
};

// Sample windows with their case-folded text, built once per record.
class CandidatePool {
 public:
  CandidatePool() = default;
  explicit CandidatePool(std::vector<TaggedWindow> windows);

  const std::vector<TaggedWindow> &windows() const { return windows_; }
  const std::u32string &folded(size_t i) const { return folded_[i]; }
  size_t size() const { return windows_.size(); }

 private:
  std::vector<TaggedWindow> windows_;
  std::vector<std::u32string> folded_;
};

constexpr int kDefaultMatchCap = 3;

// Pool entries with similarity strictly above `threshold`, keeping at most
// `per_sample_cap` best entries per sample (ties go to the earlier start).
MatchSet FindMatches(const WindowSpan &window, const CandidatePool &pool,
                     double threshold, int per_sample_cap = kDefaultMatchCap);

}  // namespace hallspan

#endif  // HALLSPAN_MATCHER_H_
