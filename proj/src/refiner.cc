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

#include "hallspan/refiner.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hallspan/utf8.h"

namespace hallspan {
namespace {

constexpr double kTieEpsilon = 1e-12;

bool IsPhrasePunctuation(char32_t c) {
  switch (c) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?':
    case U'"': case U'\'': case U'(': case U')': case U'[': case U']':
    case U'{': case U'}': case U'«': case U'»':  // « »
    case U'‘': case U'’': case U'“': case U'”':
    case U'„': case U'‹': case U'›':
    case U'、': case U'。':                        // 、 。
    case U'「': case U'」': case U'『': case U'』':
    case U'【': case U'】':
    case U'！': case U'（': case U'）': case U'，':
    case U'：': case U'；': case U'？':
    case U'،': case U'؛': case U'؟':        // Arabic , ; ?
    case U'।': case U'॥':                        // danda
      return true;
    default:
      return false;
  }
}

struct TokenShape {
  int64_t core_start;
  int64_t core_end;
};

TokenShape Shape(const std::u32string &chars, const Token &t) {
  int64_t a = t.start;
  while (a < t.end && IsPhrasePunctuation(chars[a])) ++a;
  int64_t b = t.end;
  while (b > a && IsPhrasePunctuation(chars[b - 1])) --b;
  return {a, b};
}

bool EntityLike(const std::u32string &chars, const TokenShape &s) {
  if (s.core_start >= s.core_end) return false;
  if (utf8::IsUpper(chars[s.core_start])) return true;
  for (int64_t i = s.core_start; i < s.core_end; ++i) {
    if (utf8::IsDigit(chars[i])) return true;
  }
  return false;
}

// Mean of values[begin, end); `empty` for an empty range.
double RangeMean(const std::vector<double> &prefix, int64_t begin,
                 int64_t end, double empty) {
  if (end <= begin) return empty;
  return (prefix[end] - prefix[begin]) / static_cast<double>(end - begin);
}

class EdgeSearch {
 public:
  EdgeSearch(const TokenizedText &text, const BoundaryModel &model,
             std::span<const double> char_scores, int radius)
      : text_(text), model_(model), radius_(radius) {
    prefix_.assign(char_scores.size() + 1, 0.0);
    for (size_t i = 0; i < char_scores.size(); ++i) {
      prefix_[i + 1] = prefix_[i] + char_scores[i];
    }
    // Beyond either end of the text the profile sits at its lowest level.
    if (!char_scores.empty()) {
      outside_ = *std::min_element(char_scores.begin(), char_scores.end());
    }
  }

  // Two-sided contrast at position p, each side spanning `radius_` tokens.
  double Gradient(int64_t p) const {
    const auto &tokens = text_.tokens();
    const int64_t n = static_cast<int64_t>(tokens.size());
    // Last token starting before p, first token ending after p.
    int64_t left = LastStartingBefore(p);
    int64_t right = FirstEndingAfter(p);
    double left_mean = outside_, right_mean = outside_;
    if (left >= 0) {
      int64_t begin = tokens[std::max<int64_t>(0, left - radius_ + 1)].start;
      left_mean = RangeMean(prefix_, begin, p, outside_);
    }
    if (right < n) {
      int64_t end = tokens[std::min<int64_t>(n - 1, right + radius_ - 1)].end;
      right_mean = RangeMean(prefix_, p, end, outside_);
    }
    return std::fabs(left_mean - right_mean);
  }

  // Best position for an edge currently at `edge`. `is_start` selects the
  // candidate kind; `limit` bounds the result (start < limit, end > limit).
  int64_t Best(int64_t edge, bool is_start, int64_t limit) const {
    const auto &tokens = text_.tokens();
    const int64_t n = static_cast<int64_t>(tokens.size());
    if (n == 0 || radius_ <= 0) return edge;
    int64_t anchor = is_start ? FirstEndingAfter(edge) : LastStartingBefore(edge);
    anchor = std::clamp<int64_t>(anchor, 0, n - 1);
    int64_t lo = tokens[std::max<int64_t>(0, anchor - radius_)].start;
    int64_t hi = tokens[std::min<int64_t>(n - 1, anchor + radius_)].end;

    int64_t best = edge;
    double best_gradient = Gradient(edge);
    int64_t best_move = 0;
    for (int64_t p = lo; p <= hi; ++p) {
      bool ok = is_start ? model_.IsStartCandidate(p) && p < limit
                         : model_.IsEndCandidate(p) && p > limit;
      if (!ok || p == edge || model_.Crosses(edge, p)) continue;
      double g = Gradient(p);
      int64_t move = std::llabs(p - edge);
      if (g > best_gradient + kTieEpsilon ||
          (std::fabs(g - best_gradient) <= kTieEpsilon &&
           (move < best_move || (move == best_move && p < best)))) {
        best = p;
        best_gradient = g;
        best_move = move;
      }
    }
    return best;
  }

 private:
  int64_t LastStartingBefore(int64_t p) const {
    const auto &tokens = text_.tokens();
    auto it = std::partition_point(tokens.begin(), tokens.end(),
                                   [&](const Token &t) { return t.start < p; });
    return static_cast<int64_t>(it - tokens.begin()) - 1;
  }
  int64_t FirstEndingAfter(int64_t p) const {
    const auto &tokens = text_.tokens();
    auto it = std::partition_point(tokens.begin(), tokens.end(),
                                   [&](const Token &t) { return t.end <= p; });
    return static_cast<int64_t>(it - tokens.begin());
  }

  const TokenizedText &text_;
  const BoundaryModel &model_;
  int radius_;
  std::vector<double> prefix_;
  double outside_ = 0.0;
};

}  // namespace

std::vector<double> CharScoreProfile(int64_t text_length,
                                     std::span<const ScoredSpan> spans) {
  std::vector<double> profile(std::max<int64_t>(text_length, 0), 0.0);
  for (const ScoredSpan &s : spans) {
    int64_t begin = std::max<int64_t>(s.start, 0);
    int64_t end = std::min<int64_t>(s.end, text_length);
    for (int64_t i = begin; i < end; ++i) {
      profile[i] = std::max(profile[i], s.score);
    }
  }
  return profile;
}

BoundaryModel::BoundaryModel(const TokenizedText &text) {
  const std::u32string &chars = text.chars();
  const size_t n = chars.size();
  boundary_char_.assign(n, false);
  start_candidate_.assign(n + 1, false);
  end_candidate_.assign(n + 1, false);
  forbidden_.assign(n + 1, false);

  const auto &tokens = text.tokens();
  std::vector<TokenShape> shapes;
  shapes.reserve(tokens.size());
  for (const Token &t : tokens) {
    TokenShape s = Shape(chars, t);
    shapes.push_back(s);
    for (int64_t i = t.start; i < s.core_start; ++i) boundary_char_[i] = true;
    for (int64_t i = s.core_end; i < t.end; ++i) boundary_char_[i] = true;
  }
  auto adjacent = [&](int64_t p) {
    return (p > 0 && boundary_char_[p - 1]) ||
           (p < static_cast<int64_t>(n) && boundary_char_[p]);
  };
  for (const Token &t : tokens) {
    start_candidate_[t.start] = true;
    end_candidate_[t.end] = true;
    for (int64_t p = t.start; p <= t.end; ++p) {
      if (!adjacent(p)) continue;
      if (p < t.end) start_candidate_[p] = true;
      if (p > t.start) end_candidate_[p] = true;
    }
  }

  // Entity-like runs of two or more tokens joined without punctuation.
  size_t i = 0;
  while (i < tokens.size()) {
    if (!EntityLike(chars, shapes[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < tokens.size() && EntityLike(chars, shapes[j + 1]) &&
           shapes[j].core_end == tokens[j].end &&
           shapes[j + 1].core_start == tokens[j + 1].start) {
      ++j;
    }
    if (j > i) {
      CharSpan run{shapes[i].core_start, shapes[j].core_end};
      entity_runs_.push_back(run);
      for (int64_t p = run.start + 1; p < run.end; ++p) forbidden_[p] = true;
    }
    i = j + 1;
  }

  boundary_prefix_.assign(n + 1, 0);
  for (size_t k = 0; k < n; ++k) {
    boundary_prefix_[k + 1] = boundary_prefix_[k] + (boundary_char_[k] ? 1 : 0);
  }
}

bool BoundaryModel::Crosses(int64_t a, int64_t b) const {
  if (a > b) std::swap(a, b);
  return boundary_prefix_[b] - boundary_prefix_[a] > 0;
}

std::vector<ScoredSpan> RefineBoundaries(std::span<const ScoredSpan> spans,
                                         const TokenizedText &text,
                                         std::span<const double> char_scores,
                                         double boundary_threshold,
                                         int window_size) {
  const BoundaryModel model(text);
  const int radius = static_cast<int>(
      std::ceil(boundary_threshold * static_cast<double>(window_size) - 1e-9));
  const EdgeSearch search(text, model, char_scores, radius);
  const std::u32string &chars = text.chars();
  const int64_t n = text.length();

  std::vector<ScoredSpan> out;
  for (const ScoredSpan &span : spans) {
    int64_t s = std::clamp<int64_t>(span.start, 0, n);
    int64_t e = std::clamp<int64_t>(span.end, 0, n);
    // Whitespace belongs to no token; edges sitting on it move inward.
    while (s < e && utf8::IsSpace(chars[s])) ++s;
    while (e > s && utf8::IsSpace(chars[e - 1])) --e;
    if (s >= e) continue;

    while (s > 0 && !model.IsStartCandidate(s)) --s;
    while (e < n && !model.IsEndCandidate(e)) ++e;

    s = search.Best(s, /*is_start=*/true, e);
    e = search.Best(e, /*is_start=*/false, s);
    if (s >= e) continue;

    ScoredSpan refined = span;
    refined.support = span.weight();
    refined.start = s;
    refined.end = e;
    out.push_back(refined);
  }
  return out;
}

std::vector<ScoredSpan> MergeOverlapping(std::span<const ScoredSpan> spans) {
  std::vector<ScoredSpan> current(spans.begin(), spans.end());
  for (ScoredSpan &s : current) s.support = s.weight();
  auto by_start = [](const ScoredSpan &a, const ScoredSpan &b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  };
  std::stable_sort(current.begin(), current.end(), by_start);

  while (true) {
    const size_t n = current.size();
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool merged = false;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n && current[j].start < current[i].end; ++j) {
        int64_t overlap = std::min(current[i].end, current[j].end) -
                          current[j].start;
        int64_t shorter = std::min(current[i].length(), current[j].length());
        if (overlap > 0 && 2 * overlap >= shorter) {
          size_t a = find(i), b = find(j);
          if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
            merged = true;
          }
        }
      }
    }
    if (!merged) break;

    std::vector<ScoredSpan> next;
    std::vector<double> mass;
    std::vector<size_t> slot(n, SIZE_MAX);
    for (size_t i = 0; i < n; ++i) {
      size_t root = find(i);
      const ScoredSpan &s = current[i];
      if (slot[root] == SIZE_MAX) {
        slot[root] = next.size();
        next.push_back(s);
        next.back().score = 0.0;
        next.back().origin_count = 0;
        next.back().support = 0.0;
        mass.push_back(0.0);
      }
      ScoredSpan &g = next[slot[root]];
      g.start = std::min(g.start, s.start);
      g.end = std::max(g.end, s.end);
      g.origin_count += s.origin_count;
      g.support += s.weight();
      mass[slot[root]] += s.score * s.weight();
    }
    for (size_t k = 0; k < next.size(); ++k) {
      next[k].score = next[k].support > 0.0 ? mass[k] / next[k].support : 0.0;
    }
    std::stable_sort(next.begin(), next.end(), by_start);
    current = std::move(next);
  }
  return current;
}

PredictionSet Finalize(std::span<const ScoredSpan> spans,
                       const DetectionConfig &config,
                       const TokenizedText &text) {
  const int64_t n = text.length();
  std::vector<size_t> order(spans.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const ScoredSpan &x = spans[a], &y = spans[b];
    if (x.score != y.score) return x.score > y.score;
    if (x.start != y.start) return x.start < y.start;
    return x.length() > y.length();
  });

  constexpr size_t kNone = SIZE_MAX;
  std::vector<size_t> owner(std::max<int64_t>(n, 0), kNone);
  for (size_t idx : order) {
    int64_t begin = std::max<int64_t>(spans[idx].start, 0);
    int64_t end = std::min<int64_t>(spans[idx].end, n);
    for (int64_t c = begin; c < end; ++c) {
      if (owner[c] == kNone) owner[c] = idx;
    }
  }

  PredictionSet out;
  const std::u32string &chars = text.chars();
  int64_t c = 0;
  while (c < n) {
    if (owner[c] == kNone) {
      ++c;
      continue;
    }
    size_t who = owner[c];
    int64_t begin = c;
    while (c < n && owner[c] == who) ++c;
    int64_t end = c;
    while (begin < end && utf8::IsSpace(chars[begin])) ++begin;
    while (end > begin && utf8::IsSpace(chars[end - 1])) --end;
    if (begin >= end) continue;

    double score = std::clamp(spans[who].score, 0.0, 1.0);
    bool hard = score > config.score_threshold &&
                text.CountTokens(begin, end) >=
                    static_cast<size_t>(config.min_span_length);
    if (hard) out.hard_spans.push_back({begin, end});
    if (hard || score >= config.soft_floor) {
      out.soft_spans.push_back({begin, end, score});
    }
  }
  return out;
}

}  // namespace hallspan
