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

#include "hallspan/segmenter.h"

#include <random>
#include <string>

#include "doctest.h"
#include "hallspan/error.h"
#include "hallspan/utf8.h"
#include "oracles.h"

namespace hallspan {
namespace {

std::vector<std::pair<size_t, size_t>> Ranges(
    const std::vector<WindowSpan> &windows) {
  std::vector<std::pair<size_t, size_t>> out;
  for (const WindowSpan &w : windows) {
    out.emplace_back(w.first_token, w.first_token + w.token_count);
  }
  return out;
}

TokenizedText Words(size_t n) {
  std::string text;
  for (size_t i = 0; i < n; ++i) text += (i ? " w" : "w") + std::to_string(i);
  return Tokenize(text, "en");
}

TEST_CASE("tokenize splits on whitespace runs") {
  TokenizedText tt = Tokenize("the cat sat", "en");
  REQUIRE(tt.tokens().size() == 3);
  CHECK(tt.tokens()[0] == Token{0, 3});
  CHECK(tt.tokens()[1] == Token{4, 7});
  CHECK(tt.tokens()[2] == Token{8, 11});
  CHECK(tt.TokenText(1) == "cat");
  CHECK(Tokenize("", "en").tokens().empty());
  CHECK(Tokenize("  \t\n ", "en").tokens().empty());
  CHECK(Tokenize("  a  b ", "fr").tokens() ==
        std::vector<Token>{{2, 3}, {5, 6}});
}

TEST_CASE("chinese tokens are single characters") {
  std::string text = "巴黎是法国首都";
  TokenizedText tt = Tokenize(text, "zh");
  std::u32string chars = utf8::Decode(text);
  REQUIRE(tt.tokens().size() == chars.size());
  CHECK(tt.tokens().size() == 7);
  for (size_t i = 0; i < chars.size(); ++i) {
    CHECK(tt.tokens()[i] == Token{static_cast<int64_t>(i),
                                  static_cast<int64_t>(i + 1)});
    CHECK(tt.TokenText(i) == utf8::Encode(chars.substr(i, 1)));
  }
  CHECK(Tokenize("巴黎 是", "zh-CN").tokens().size() == 3);
}

TEST_CASE("token invariants hold on multilingual text") {
  for (auto [text, lang] : std::vector<std::pair<std::string, std::string>>{
           {"भारत की राजधानी नई दिल्ली है", "hi"},
           {"عاصمة مصر هي القاهرة", "ar"},
           {" leading and  trailing ", "en"},
           {"法国的首都是巴黎，人口约两百万。", "zh"}}) {
    TokenizedText tt = Tokenize(text, lang);
    int64_t prev_end = 0;
    for (size_t i = 0; i < tt.tokens().size(); ++i) {
      const Token &t = tt.tokens()[i];
      CHECK(t.start >= prev_end);
      CHECK(t.start < t.end);
      CHECK(tt.Slice(t.start, t.end) == tt.TokenText(i));
      prev_end = t.end;
    }
  }
}

TEST_CASE("enumerate_windows examples") {
  CHECK(Ranges(EnumerateWindows(Words(8), 4, 2)) ==
        std::vector<std::pair<size_t, size_t>>{{0, 4}, {2, 6}, {4, 8}, {6, 8}});
  CHECK(Ranges(EnumerateWindows(Words(5), 5, 3)) ==
        std::vector<std::pair<size_t, size_t>>{{0, 5}, {3, 5}});
  CHECK(EnumerateWindows(Words(0), 4, 2).empty());
}

TEST_CASE("enumerate_windows rejects bad parameters") {
  CHECK_THROWS_AS(EnumerateWindows(Words(3), 0, 1), ConfigError);
  CHECK_THROWS_AS(EnumerateWindows(Words(3), 3, 0), ConfigError);
  CHECK_THROWS_AS(EnumerateWindows(Words(3), 3, 4), ConfigError);
}

TEST_CASE("window properties against the index oracle") {
  for (size_t n = 0; n <= 12; ++n) {
    TokenizedText tt = Words(n);
    for (int w = 1; w <= 6; ++w) {
      for (int t = 1; t <= w; ++t) {
        auto windows = EnumerateWindows(tt, w, t);
        CHECK(Ranges(windows) == oracle::WindowIndices(n, w, t));
        std::vector<bool> covered(tt.length(), false);
        int64_t prev_start = -1;
        for (const WindowSpan &win : windows) {
          CHECK(win.token_count >= 1);
          CHECK(win.start == tt.tokens()[win.first_token].start);
          CHECK(win.end ==
                tt.tokens()[win.first_token + win.token_count - 1].end);
          CHECK(win.text == tt.Slice(win.start, win.end));
          CHECK(win.start >= prev_start);
          prev_start = win.start;
          for (int64_t c = win.start; c < win.end; ++c) covered[c] = true;
        }
        for (const Token &tok : tt.tokens()) {
          for (int64_t c = tok.start; c < tok.end; ++c) CHECK(covered[c]);
        }
      }
    }
  }
}

TEST_CASE("segment_samples tags every window") {
  SampleSet two;
  two.samples = {"a b c d e f g h", "s t u v w x y z"};
  auto pool = SegmentSamples(two, "en", 4, 2);
  CHECK(pool.size() == 2 * oracle::WindowIndices(8, 4, 2).size());
  CHECK(pool.size() == 8);
  CHECK(pool.front().sample_index == 0);
  CHECK(pool.back().sample_index == 1);
  CHECK(pool.back().window.text == "y z");

  CHECK(SegmentSamples(SampleSet{}, "en", 4, 2).empty());

  SampleSet one;
  one.samples = {"word"};
  auto single = SegmentSamples(one, "en", 5, 3);
  REQUIRE(single.size() == 1);
  CHECK(single[0].window.token_count == 1);
  CHECK(single[0].window.text == "word");
}

}  // namespace
}  // namespace hallspan
