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

#ifndef HALLSPAN_SAMPLER_H_
#define HALLSPAN_SAMPLER_H_

#include <chrono>
#include <map>
#include <optional>
#include <string>

#include "hallspan/datamodel.h"

namespace hallspan {

enum class ApiShape { kChatCompletion, kCompletion };

// Decoding parameters for the stochastic samples. Defaults: 20 samples at
// temperature 0.1, top-p 0.9, top-k 50, 64 new tokens, no repeated 3-grams.
struct SamplingProfile {
  double temperature = 0.1;
  double top_p = 0.9;
  int top_k = 50;
  int max_tokens = 64;
  int n = 20;
  int no_repeat_ngram = 3;
  std::string model = "meta-llama/Llama-3.2-3B-Instruct";
  // Base URL, e.g. "http://localhost:8000"; the API path is appended.
  std::string endpoint_url;
  ApiShape api = ApiShape::kChatCompletion;
  // "{query}" is replaced by the query text.
  std::string prompt_template = "{query}";
  std::string auth_token;
  std::chrono::milliseconds timeout{60000};
  int retry_budget = 3;
  std::chrono::milliseconds retry_backoff{500};
};

// Throws ConfigError when a SamplingProfile invariant fails.
void ValidateProfile(const SamplingProfile &profile);

// Fills endpoint/model/token from HALLSPAN_COMPLETION_URL,
// HALLSPAN_COMPLETION_MODEL and HALLSPAN_COMPLETION_TOKEN when set.
SamplingProfile ProfileFromEnvironment(SamplingProfile base = {});

// Request body parameters, in the order they are sent.
nlohmann::ordered_json ProfileParameters(const SamplingProfile &profile);

// Stable hex digest of everything that changes the samples: model, API
// shape, prompt template and decoding parameters. Timeouts, retries,
// credentials and the endpoint host are excluded.
std::string ProfileFingerprint(const SamplingProfile &profile);

std::string Sha256Hex(std::string_view data);

// On-disk sample cache: one JSONL file per (query hash, profile
// fingerprint), written atomically.
class SampleCache {
 public:
  explicit SampleCache(std::string directory);

  std::string PathFor(const std::string &query,
                      const SamplingProfile &profile) const;
  std::optional<SampleSet> Lookup(const std::string &query,
                                  const SamplingProfile &profile) const;
  void Store(const std::string &query, const SamplingProfile &profile,
             const SampleSet &samples) const;

 private:
  std::string directory_;
};

// Source of completions. Implementations return exactly profile.n samples
// or throw SamplerError.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual SampleSet Complete(const std::string &query,
                             const SamplingProfile &profile) = 0;
};

// OpenAI-style HTTP endpoint ("/v1/chat/completions" or "/v1/completions")
// requesting all n choices in one call. Transport errors, 429 and 5xx are
// retried up to the retry budget. A 400/422 response that names top_k or
// no_repeat_ngram_size drops that parameter and records a downgrade in the
// provenance.
class HttpCompletionClient : public CompletionClient {
 public:
  SampleSet Complete(const std::string &query,
                     const SamplingProfile &profile) override;
};

// Cache first; on a miss asks `client` (when given) and stores the result.
// With no client a miss is a SamplerError.
SampleSet GenerateSamples(const std::string &query,
                          const SamplingProfile &profile,
                          const SampleCache *cache, CompletionClient *client);

// JSONL of {"id", "samples", "provenance"}. Throws ValidationError on a
// duplicate id.
std::map<std::string, SampleSet> LoadOfflineSamples(const std::string &path);
std::string SerializeSampleEntry(const std::string &id,
                                 const SampleSet &samples);
SampleSet ParseSampleSet(const nlohmann::ordered_json &entry);

}  // namespace hallspan

#endif  // HALLSPAN_SAMPLER_H_
