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

#ifndef HALLSPAN_SEGMENTER_H_
#define HALLSPAN_SEGMENTER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hallspan/datamodel.h"

namespace hallspan {

struct Token {
  int64_t start = 0;
  int64_t end = 0;
  bool operator==(const Token &) const = default;
};

// Text plus its token boundaries. Token ranges are in Unicode scalar values
// and are disjoint and strictly increasing.
class TokenizedText {
 public:
  TokenizedText() = default;
  TokenizedText(std::string text, std::u32string chars,
                std::vector<Token> tokens);

  const std::string &text() const { return text_; }
  const std::u32string &chars() const { return chars_; }
  const std::vector<Token> &tokens() const { return tokens_; }
  int64_t length() const { return static_cast<int64_t>(chars_.size()); }

  // UTF-8 substring over the character range [start, end).
  std::string Slice(int64_t start, int64_t end) const;
  std::string TokenText(size_t index) const;

  // Number of tokens intersecting [start, end).
  size_t CountTokens(int64_t start, int64_t end) const;

 private:
  std::string text_;
  std::u32string chars_;
  std::vector<Token> tokens_;
};

// A run of consecutive tokens. `start`/`end` is the character hull of the
// covered tokens and `text` the original substring over it.
struct WindowSpan {
  size_t first_token = 0;
  size_t token_count = 0;
  int64_t start = 0;
  int64_t end = 0;
  std::string text;

  CharSpan range() const { return {start, end}; }
  bool operator==(const WindowSpan &) const = default;
};

struct TaggedWindow {
  size_t sample_index = 0;
  WindowSpan window;
  bool operator==(const TaggedWindow &) const = default;
};

// Whitespace-delimited languages get maximal non-whitespace runs; Chinese
// ("zh", "zh-*") gets one token per non-whitespace character.
TokenizedText Tokenize(std::string_view text, std::string_view lang);

// Window i covers tokens [i * stride, i * stride + window_size), clipped to
// the token count. Windows are emitted while the start index is a valid
// token, so the trailing ones may be shorter than window_size.
// Throws ConfigError unless 1 <= stride <= window_size.
std::vector<WindowSpan> EnumerateWindows(const TokenizedText &text,
                                         int window_size, int stride);

// Windows of every sample, tagged with the sample's index.
std::vector<TaggedWindow> SegmentSamples(const SampleSet &samples,
                                         std::string_view lang,
                                         int window_size, int stride);

}  // namespace hallspan

#endif  // HALLSPAN_SEGMENTER_H_
