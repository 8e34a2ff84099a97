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

#include "hallspan/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "hallspan/error.h"
#include "hallspan/utf8.h"
#include "http_util.h"
#include "json.hpp"

namespace hallspan {
namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr uint64_t kTrigramSeed = 0x9e3779b97f4a7c15ULL;
constexpr char32_t kBoundary = 0x2;

uint64_t HashTrigram(char32_t a, char32_t b, char32_t c) {
  uint64_t h = kFnvOffset ^ kTrigramSeed;
  for (char32_t ch : {a, b, c}) {
    for (int shift = 0; shift < 32; shift += 8) {
      h ^= (ch >> shift) & 0xFF;
      h *= kFnvPrime;
    }
  }
  return h;
}

std::string Getenv(const char *name) {
  const char *value = std::getenv(name);
  return value ? value : "";
}

}  // namespace

EmbeddingVector EmbeddingVector::Normalized(std::vector<double> values) {
  double norm = 0.0;
  for (double v : values) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0 || !std::isfinite(norm)) {
    std::fill(values.begin(), values.end(), 0.0);
    if (!values.empty()) values[0] = 1.0;
    return EmbeddingVector(std::move(values));
  }
  for (double &v : values) v /= norm;
  return EmbeddingVector(std::move(values));
}

double Cosine(const EmbeddingVector &a, const EmbeddingVector &b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("embedding dimension mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.dimension(); ++i) {
    dot += a.values()[i] * b.values()[i];
    na += a.values()[i] * a.values()[i];
    nb += b.values()[i] * b.values()[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

StubEmbeddingProvider::StubEmbeddingProvider(size_t dimension)
    : dimension_(dimension) {
  if (dimension < 8) {
    throw std::invalid_argument("stub embedding dimension must be >= 8");
  }
}

EmbeddingVector StubEmbeddingProvider::Embed(const std::string &text) const {
  std::u32string chars = utf8::Decode(text);
  chars.insert(chars.begin(), kBoundary);
  chars.push_back(kBoundary);
  std::vector<double> histogram(dimension_, 0.0);
  for (size_t i = 0; i + 2 < chars.size(); ++i) {
    histogram[HashTrigram(chars[i], chars[i + 1], chars[i + 2]) %
              dimension_] += 1.0;
  }
  return EmbeddingVector::Normalized(std::move(histogram));
}

std::vector<EmbeddingVector> StubEmbeddingProvider::EmbedBatch(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string &text : texts) out.push_back(Embed(text));
  return out;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(Options options)
    : options_(std::move(options)) {
  internal::ParseUrl(options_.url);
}

RemoteEmbeddingProvider::Options
RemoteEmbeddingProvider::OptionsFromEnvironment() {
  Options options;
  options.url = Getenv("HALLSPAN_EMBEDDING_URL");
  options.token = Getenv("HALLSPAN_EMBEDDING_TOKEN");
  options.model = Getenv("HALLSPAN_EMBEDDING_MODEL");
  if (options.url.empty()) {
    throw ConfigError(
        "remote embedding provider needs HALLSPAN_EMBEDDING_URL");
  }
  return options;
}

size_t RemoteEmbeddingProvider::dimension() const {
  std::lock_guard<std::mutex> lock(mu_);
  return dimension_;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::EmbedBatch(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  const size_t chunk = std::max<size_t>(options_.max_batch, 1);
  for (size_t i = 0; i < texts.size(); i += chunk) {
    auto part = EmbedChunk(texts.subspan(i, std::min(chunk, texts.size() - i)));
    for (auto &v : part) out.push_back(std::move(v));
  }
  return out;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::EmbedChunk(
    std::span<const std::string> texts) {
  internal::SplitUrl url = internal::ParseUrl(options_.url);
  nlohmann::json body;
  if (!options_.model.empty()) body["model"] = options_.model;
  body["input"] = std::vector<std::string>(texts.begin(), texts.end());
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
    }
    auto client =
        internal::MakeClient(url.origin, options_.timeout, options_.token);
    auto response = client->Post(url.path, payload, "application/json");
    if (!response) {
      last_error = "transport error: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status == 429 || response->status >= 500) {
      last_error = "HTTP " + std::to_string(response->status);
      continue;
    }
    if (response->status != 200) {
      throw ScoringError("embedding endpoint returned HTTP " +
                         std::to_string(response->status) + ": " +
                         response->body.substr(0, 200));
    }

    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(response->body);
    } catch (const nlohmann::json::parse_error &e) {
      throw ScoringError(std::string("embedding endpoint sent malformed JSON: ") +
                         e.what());
    }
    std::vector<std::vector<double>> raw(texts.size());
    try {
      if (reply.contains("data")) {
        const auto &data = reply["data"];
        for (size_t i = 0; i < data.size(); ++i) {
          size_t index = data[i].value("index", i);
          if (index >= raw.size()) throw ScoringError("embedding index out of range");
          raw[index] = data[i]["embedding"].get<std::vector<double>>();
        }
      } else if (reply.contains("embeddings")) {
        const auto &data = reply["embeddings"];
        for (size_t i = 0; i < data.size() && i < raw.size(); ++i) {
          raw[i] = data[i].get<std::vector<double>>();
        }
      } else {
        throw ScoringError("embedding response has neither 'data' nor "
                           "'embeddings'");
      }
    } catch (const nlohmann::json::exception &e) {
      throw ScoringError(std::string("unexpected embedding response: ") +
                         e.what());
    }

    std::vector<EmbeddingVector> out;
    out.reserve(raw.size());
    std::lock_guard<std::mutex> lock(mu_);
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].empty()) {
        throw ScoringError("embedding endpoint returned no vector for input " +
                           std::to_string(i));
      }
      if (dimension_ == 0) dimension_ = raw[i].size();
      if (raw[i].size() != dimension_) {
        throw ScoringError("embedding dimension changed from " +
                           std::to_string(dimension_) + " to " +
                           std::to_string(raw[i].size()));
      }
      out.push_back(EmbeddingVector::Normalized(std::move(raw[i])));
    }
    return out;
  }
  throw ScoringError("embedding endpoint unavailable after " +
                     std::to_string(options_.max_retries + 1) +
                     " attempts: " + last_error);
}

}  // namespace hallspan
