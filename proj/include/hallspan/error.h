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

#ifndef HALLSPAN_ERROR_H_
#define HALLSPAN_ERROR_H_

#include <stdexcept>
#include <string>

namespace hallspan {

// Base class for every error raised by the library. The CLI maps each
// subclass to its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON or invalid UTF-8. Carries the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, size_t byte_offset)
      : Error(message), byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

// Well-formed input violating a data invariant (span bounds, probs, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid DetectionConfig, GridSpec or window parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Embedding provider failure while scoring a window.
class ScoringError : public Error {
 public:
  using Error::Error;
};

// Completion endpoint or sample cache failure.
class SamplerError : public Error {
 public:
  using Error::Error;
};

// No samples available for a record.
class MissingSamplesError : public Error {
 public:
  using Error::Error;
};

// Span outside the text it refers to, or misaligned prediction/gold ids.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace hallspan

#endif  // HALLSPAN_ERROR_H_
