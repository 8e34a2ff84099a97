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

#include "hallspan/matcher.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "hallspan/utf8.h"

namespace hallspan {
namespace {

struct Block {
  size_t a = 0;
  size_t b = 0;
  size_t size = 0;
};

// Longest common substring of a[alo, ahi) and b[blo, bhi). Scanning i and
// then j in increasing order with a strict improvement test keeps the block
// that starts earliest in a, then earliest in b.
Block LongestMatch(std::u32string_view a, std::u32string_view b, size_t alo,
                   size_t ahi, size_t blo, size_t bhi,
                   std::vector<size_t> &prev, std::vector<size_t> &cur) {
  Block best{alo, blo, 0};
  std::fill(prev.begin() + blo, prev.begin() + bhi + 1, 0);
  for (size_t i = alo; i < ahi; ++i) {
    cur[blo] = 0;
    for (size_t j = blo; j < bhi; ++j) {
      if (a[i] == b[j]) {
        size_t k = prev[j] + 1;
        cur[j + 1] = k;
        if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
      } else {
        cur[j + 1] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace

size_t MatchingCharacters(std::u32string_view a, std::u32string_view b) {
  // prev[j + 1] holds the length of the common suffix ending at (i - 1, j).
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  size_t total = 0;
  std::vector<std::tuple<size_t, size_t, size_t, size_t>> stack;
  stack.emplace_back(0, a.size(), 0, b.size());
  while (!stack.empty()) {
    auto [alo, ahi, blo, bhi] = stack.back();
    stack.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    Block m = LongestMatch(a, b, alo, ahi, blo, bhi, prev, cur);
    if (m.size == 0) continue;
    total += m.size;
    stack.emplace_back(alo, m.a, blo, m.b);
    stack.emplace_back(m.a + m.size, ahi, m.b + m.size, bhi);
  }
  return total;
}

double FoldedSimilarity(std::u32string_view a, std::u32string_view b) {
  const size_t length = a.size() + b.size();
  if (length == 0) return 1.0;
  return 2.0 * static_cast<double>(MatchingCharacters(a, b)) /
         static_cast<double>(length);
}

double SequenceSimilarity(std::string_view a, std::string_view b) {
  return FoldedSimilarity(utf8::ToLower(utf8::Decode(a)),
                          utf8::ToLower(utf8::Decode(b)));
}

CandidatePool::CandidatePool(std::vector<TaggedWindow> windows)
    : windows_(std::move(windows)) {
  folded_.reserve(windows_.size());
  for (const TaggedWindow &w : windows_) {
    folded_.push_back(utf8::ToLower(utf8::Decode(w.window.text)));
  }
}

MatchSet FindMatches(const WindowSpan &window, const CandidatePool &pool,
                     double threshold, int per_sample_cap) {
  MatchSet result;
  result.source = window;
  const std::u32string query = utf8::ToLower(utf8::Decode(window.text));

  std::map<size_t, std::vector<Match>> by_sample;
  for (size_t i = 0; i < pool.size(); ++i) {
    double similarity = FoldedSimilarity(query, pool.folded(i));
    if (!(similarity > threshold)) continue;
    const TaggedWindow &entry = pool.windows()[i];
    by_sample[entry.sample_index].push_back(
        {entry.sample_index, entry.window, similarity});
  }

  const size_t cap = static_cast<size_t>(std::max(per_sample_cap, 1));
  for (auto &[sample, matches] : by_sample) {
    std::sort(matches.begin(), matches.end(),
              [](const Match &x, const Match &y) {
                if (x.similarity != y.similarity) {
                  return x.similarity > y.similarity;
                }
                if (x.span.start != y.span.start) {
                  return x.span.start < y.span.start;
                }
                return x.span.end < y.span.end;
              });
    if (matches.size() > cap) matches.resize(cap);
    std::sort(matches.begin(), matches.end(),
              [](const Match &x, const Match &y) {
                return std::tie(x.span.start, x.span.end) <
                       std::tie(y.span.start, y.span.end);
              });
    for (Match &m : matches) result.matches.push_back(std::move(m));
    ++result.matched_sample_count;
  }
  return result;
}

}  // namespace hallspan
