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

#ifndef HALLSPAN_UTF8_H_
#define HALLSPAN_UTF8_H_

#include <string>
#include <string_view>

namespace hallspan::utf8 {

// Decodes UTF-8 into Unicode scalar values. Throws ParseError on malformed
// input (overlong forms, surrogates and truncated sequences included).
std::u32string Decode(std::string_view text);

std::string Encode(std::u32string_view chars);

// Number of Unicode scalar values in `text`.
size_t Length(std::string_view text);

bool IsSpace(char32_t c);
bool IsUpper(char32_t c);
bool IsAlpha(char32_t c);
bool IsDigit(char32_t c);
char32_t ToLower(char32_t c);

std::u32string ToLower(std::u32string_view chars);

// Case-folds, trims and collapses internal whitespace runs to one space.
std::u32string Canonicalize(std::u32string_view chars);

}  // namespace hallspan::utf8

#endif  // HALLSPAN_UTF8_H_
