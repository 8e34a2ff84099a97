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

#include <algorithm>

#include "hallspan/error.h"
#include "hallspan/utf8.h"

namespace hallspan {
namespace {

bool PerCharacterLanguage(std::string_view lang) {
  return lang == "zh" || lang.starts_with("zh-") || lang.starts_with("zh_");
}

void CheckWindowParams(int window_size, int stride) {
  if (window_size < 1 || stride < 1 || stride > window_size) {
    throw ConfigError("window parameters need 1 <= stride <= window_size (got "
                      "window_size=" + std::to_string(window_size) +
                      ", stride=" + std::to_string(stride) + ")");
  }
}

}  // namespace

TokenizedText::TokenizedText(std::string text, std::u32string chars,
                             std::vector<Token> tokens)
    : text_(std::move(text)),
      chars_(std::move(chars)),
      tokens_(std::move(tokens)) {}

std::string TokenizedText::Slice(int64_t start, int64_t end) const {
  start = std::clamp<int64_t>(start, 0, length());
  end = std::clamp<int64_t>(end, start, length());
  return utf8::Encode(std::u32string_view(chars_).substr(start, end - start));
}

std::string TokenizedText::TokenText(size_t index) const {
  return Slice(tokens_[index].start, tokens_[index].end);
}

size_t TokenizedText::CountTokens(int64_t start, int64_t end) const {
  auto first = std::partition_point(
      tokens_.begin(), tokens_.end(),
      [&](const Token &t) { return t.end <= start; });
  auto last = std::partition_point(
      first, tokens_.end(), [&](const Token &t) { return t.start < end; });
  return static_cast<size_t>(last - first);
}

TokenizedText Tokenize(std::string_view text, std::string_view lang) {
  std::u32string chars = utf8::Decode(text);
  std::vector<Token> tokens;
  const bool per_char = PerCharacterLanguage(lang);
  const int64_t n = static_cast<int64_t>(chars.size());
  int64_t i = 0;
  while (i < n) {
    if (utf8::IsSpace(chars[i])) {
      ++i;
      continue;
    }
    int64_t start = i;
    if (per_char) {
      ++i;
    } else {
      while (i < n && !utf8::IsSpace(chars[i])) ++i;
    }
    tokens.push_back({start, i});
  }
  return TokenizedText(std::string(text), std::move(chars), std::move(tokens));
}

std::vector<WindowSpan> EnumerateWindows(const TokenizedText &text,
                                         int window_size, int stride) {
  CheckWindowParams(window_size, stride);
  const auto &tokens = text.tokens();
  const size_t count = tokens.size();
  std::vector<WindowSpan> windows;
  for (size_t first = 0; first < count; first += stride) {
    size_t last = std::min(first + static_cast<size_t>(window_size), count);
    WindowSpan span;
    span.first_token = first;
    span.token_count = last - first;
    span.start = tokens[first].start;
    span.end = tokens[last - 1].end;
    span.text = text.Slice(span.start, span.end);
    windows.push_back(std::move(span));
  }
  return windows;
}

std::vector<TaggedWindow> SegmentSamples(const SampleSet &samples,
                                         std::string_view lang,
                                         int window_size, int stride) {
  CheckWindowParams(window_size, stride);
  std::vector<TaggedWindow> pool;
  for (size_t i = 0; i < samples.samples.size(); ++i) {
    TokenizedText tt = Tokenize(samples.samples[i], lang);
    for (WindowSpan &w : EnumerateWindows(tt, window_size, stride)) {
      pool.push_back({i, std::move(w)});
    }
  }
  return pool;
}

}  // namespace hallspan
