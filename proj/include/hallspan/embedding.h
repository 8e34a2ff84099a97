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

#ifndef HALLSPAN_EMBEDDING_H_
#define HALLSPAN_EMBEDDING_H_

#include <chrono>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace hallspan {

// Real vector with unit L2 norm.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;

  // Scales `values` to unit norm. A zero vector is mapped to the first basis
  // vector so that every embedding has norm 1.
  static EmbeddingVector Normalized(std::vector<double> values);

  const std::vector<double> &values() const { return values_; }
  size_t dimension() const { return values_.size(); }

  bool operator==(const EmbeddingVector &) const = default;

 private:
  explicit EmbeddingVector(std::vector<double> values)
      : values_(std::move(values)) {}
  std::vector<double> values_;
};

// Cosine similarity, a.b / (|a| |b|). Throws std::invalid_argument on a
// dimension mismatch.
double Cosine(const EmbeddingVector &a, const EmbeddingVector &b);

// Sentence embedding source. EmbedBatch returns one vector per input, in
// order, and is deterministic for a fixed input within a session.
// Implementations must tolerate concurrent EmbedBatch calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string name() const = 0;
  // 0 until known for providers that learn it from the first response.
  virtual size_t dimension() const = 0;
  virtual std::vector<EmbeddingVector> EmbedBatch(
      std::span<const std::string> texts) = 0;
};

// Offline provider: L2-normalized histogram of hashed character trigrams
// over `dimension` buckets. Strings are padded with one boundary marker on
// each side, so even one-character strings produce a trigram.
class StubEmbeddingProvider : public EmbeddingProvider {
 public:
  // Throws std::invalid_argument when dimension < 8.
  explicit StubEmbeddingProvider(size_t dimension = 256);

  std::string name() const override { return "stub-trigram"; }
  size_t dimension() const override { return dimension_; }
  std::vector<EmbeddingVector> EmbedBatch(
      std::span<const std::string> texts) override;

  EmbeddingVector Embed(const std::string &text) const;

 private:
  size_t dimension_;
};

// HTTP client for an embedding service. Sends
//   {"model": ..., "input": [texts...]}
// and accepts either {"data": [{"embedding": [...], "index": i}, ...]} or
// {"embeddings": [[...], ...]}. Vectors are normalized on receipt.
class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  struct Options {
    std::string url;
    std::string token;
    std::string model;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 2;
    // Texts per request; larger batches are split.
    size_t max_batch = 256;
  };

  explicit RemoteEmbeddingProvider(Options options);

  // Reads HALLSPAN_EMBEDDING_URL, HALLSPAN_EMBEDDING_TOKEN and
  // HALLSPAN_EMBEDDING_MODEL. Throws ConfigError when the URL is unset.
  static Options OptionsFromEnvironment();

  std::string name() const override { return "remote:" + options_.url; }
  size_t dimension() const override;
  std::vector<EmbeddingVector> EmbedBatch(
      std::span<const std::string> texts) override;

 private:
  std::vector<EmbeddingVector> EmbedChunk(std::span<const std::string> texts);

  Options options_;
  mutable std::mutex mu_;
  size_t dimension_ = 0;
};

}  // namespace hallspan

#endif  // HALLSPAN_EMBEDDING_H_
