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

#include "hallspan/utf8.h"

#include <locale>

#include "hallspan/error.h"

namespace hallspan::utf8 {
namespace {

// Character classes come from the C.UTF-8 locale, which carries the full
// Unicode tables in glibc. Falls back to the classic locale elsewhere.
const std::ctype<wchar_t> &CType() {
  static const std::locale *locale = [] {
    try {
      return new std::locale("C.UTF-8");
    } catch (const std::runtime_error &) {
      return new std::locale(std::locale::classic());
    }
  }();
  return std::use_facet<std::ctype<wchar_t>>(*locale);
}

[[noreturn]] void Fail(size_t offset) {
  throw ParseError("invalid UTF-8 at byte offset " + std::to_string(offset),
                   offset);
}

}  // namespace

std::u32string Decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    auto lead = static_cast<unsigned char>(text[i]);
    int extra;
    char32_t cp;
    char32_t min;
    if (lead < 0x80) {
      out.push_back(lead);
      ++i;
      continue;
    } else if ((lead & 0xE0) == 0xC0) {
      extra = 1, cp = lead & 0x1F, min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2, cp = lead & 0x0F, min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3, cp = lead & 0x07, min = 0x10000;
    } else {
      Fail(i);
    }
    if (i + extra >= text.size()) Fail(i);
    for (int k = 1; k <= extra; ++k) {
      auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) Fail(i);
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) Fail(i);
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string Encode(std::u32string_view chars) {
  std::string out;
  out.reserve(chars.size());
  for (char32_t c : chars) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

size_t Length(std::string_view text) { return Decode(text).size(); }

bool IsSpace(char32_t c) {
  if (c < 0x80) return c == ' ' || (c >= 0x09 && c <= 0x0D);
  // U+200B (zero width space) is not classified as space by glibc.
  if (c == 0x200B || c == 0xFEFF) return true;
  return CType().is(std::ctype_base::space, static_cast<wchar_t>(c));
}

bool IsUpper(char32_t c) {
  return CType().is(std::ctype_base::upper, static_cast<wchar_t>(c));
}

bool IsAlpha(char32_t c) {
  return CType().is(std::ctype_base::alpha, static_cast<wchar_t>(c));
}

bool IsDigit(char32_t c) {
  if (c >= '0' && c <= '9') return true;
  // Arabic-Indic, extended Arabic-Indic, Devanagari and full-width digits.
  return (c >= 0x0660 && c <= 0x0669) || (c >= 0x06F0 && c <= 0x06F9) ||
         (c >= 0x0966 && c <= 0x096F) || (c >= 0xFF10 && c <= 0xFF19);
}

char32_t ToLower(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 32 : c;
  return static_cast<char32_t>(CType().tolower(static_cast<wchar_t>(c)));
}

std::u32string ToLower(std::u32string_view chars) {
  std::u32string out(chars);
  for (char32_t &c : out) c = ToLower(c);
  return out;
}

std::u32string Canonicalize(std::u32string_view chars) {
  std::u32string out;
  out.reserve(chars.size());
  bool pending_space = false;
  for (char32_t c : chars) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(ToLower(c));
  }
  return out;
}

}  // namespace hallspan::utf8
