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

#include "hallspan/scorer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "hallspan/error.h"
#include "hallspan/utf8.h"

namespace hallspan {
namespace {

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string Describe(const WindowSpan &w) {
  return "window [" + std::to_string(w.start) + ", " + std::to_string(w.end) +
         ") \"" + w.text + "\"";
}

// Entropy of a distribution given by non-negative counts.
Entropy CountEntropy(const std::map<std::u32string, size_t> &counts,
                     size_t total) {
  Entropy e;
  if (total == 0) {
    e.normalized = 1.0;
    return e;
  }
  for (const auto &[text, count] : counts) {
    double p = static_cast<double>(count) / static_cast<double>(total);
    e.raw -= p * std::log(p);
  }
  e.raw = std::max(e.raw, 0.0);
  if (counts.size() >= 2) {
    e.normalized = Clamp01(e.raw / std::log(static_cast<double>(counts.size())));
  }
  return e;
}

}  // namespace

SemanticEntropy SemanticEntropyFromSimilarities(
    std::span<const double> similarities) {
  SemanticEntropy e;
  const size_t k = similarities.size();
  if (k == 0) {
    e.normalized = 1.0;
    return e;
  }
  double peak = *std::max_element(similarities.begin(), similarities.end());
  e.probabilities.resize(k);
  double sum = 0.0;
  for (size_t i = 0; i < k; ++i) {
    e.probabilities[i] = std::exp(similarities[i] - peak);
    sum += e.probabilities[i];
  }
  for (double &p : e.probabilities) p /= sum;
  if (k == 1) return e;
  for (double p : e.probabilities) {
    if (p > 0.0) e.raw -= p * std::log(p);
  }
  e.raw = std::clamp(e.raw, 0.0, std::log(static_cast<double>(k)));
  e.normalized = Clamp01(e.raw / std::log(static_cast<double>(k)));
  return e;
}

SemanticEntropy ComputeSemanticEntropy(const MatchSet &matches,
                                       EmbeddingProvider &provider) {
  if (matches.matches.empty()) return SemanticEntropyFromSimilarities({});
  std::vector<std::string> texts;
  texts.reserve(matches.matches.size() + 1);
  texts.push_back(matches.source.text);
  for (const Match &m : matches.matches) texts.push_back(m.span.text);

  std::vector<EmbeddingVector> vectors;
  try {
    vectors = provider.EmbedBatch(texts);
  } catch (const std::exception &e) {
    throw ScoringError("embedding provider '" + provider.name() +
                       "' failed for " + Describe(matches.source) + ": " +
                       e.what());
  }
  if (vectors.size() != texts.size()) {
    throw ScoringError("embedding provider '" + provider.name() +
                       "' returned " + std::to_string(vectors.size()) +
                       " vectors for " + std::to_string(texts.size()) +
                       " texts in " + Describe(matches.source));
  }
  std::vector<double> similarities;
  for (size_t i = 1; i < vectors.size(); ++i) {
    similarities.push_back(Cosine(vectors[0], vectors[i]));
  }
  return SemanticEntropyFromSimilarities(similarities);
}

Entropy ComputeLexicalEntropy(const MatchSet &matches) {
  std::map<std::u32string, size_t> counts;
  for (const Match &m : matches.matches) {
    ++counts[utf8::Canonicalize(utf8::Decode(m.span.text))];
  }
  return CountEntropy(counts, matches.matches.size());
}

double FrequencyScore(const MatchSet &matches, int sample_count) {
  if (sample_count < 1) throw ConfigError("sample count must be >= 1");
  return Clamp01(1.0 - static_cast<double>(matches.matched_sample_count) /
                           static_cast<double>(sample_count));
}

double CombinedScore(double semantic, double lexical, double frequency,
                     const DetectionConfig &config) {
  return config.alpha * semantic + config.beta * lexical +
         config.gamma * frequency;
}

std::vector<ComponentScores> ScoreWindows(const std::vector<MatchSet> &windows,
                                          int sample_count,
                                          const DetectionConfig &config,
                                          EmbeddingProvider &provider,
                                          const std::string &record_id) {
  // One provider call per record over the distinct texts involved.
  std::vector<std::string> texts;
  std::unordered_map<std::string, size_t> index;
  auto intern = [&](const std::string &text) {
    if (index.emplace(text, texts.size()).second) texts.push_back(text);
  };
  for (const MatchSet &ms : windows) {
    if (ms.matches.empty()) continue;
    intern(ms.source.text);
    for (const Match &m : ms.matches) intern(m.span.text);
  }

  std::vector<EmbeddingVector> vectors;
  if (!texts.empty()) {
    try {
      vectors = provider.EmbedBatch(texts);
    } catch (const std::exception &e) {
      throw ScoringError("record " + record_id + ": embedding provider '" +
                         provider.name() + "' failed on a batch of " +
                         std::to_string(texts.size()) +
                         " window texts (first: " + Describe(windows.front().source) +
                         "): " + e.what());
    }
    if (vectors.size() != texts.size()) {
      throw ScoringError("record " + record_id + ": embedding provider '" +
                         provider.name() + "' returned " +
                         std::to_string(vectors.size()) + " vectors for " +
                         std::to_string(texts.size()) + " texts");
    }
  }

  std::vector<ComponentScores> scores;
  scores.reserve(windows.size());
  for (const MatchSet &ms : windows) {
    std::vector<double> similarities;
    if (!ms.matches.empty()) {
      const EmbeddingVector &source = vectors[index.at(ms.source.text)];
      for (const Match &m : ms.matches) {
        similarities.push_back(Cosine(source, vectors[index.at(m.span.text)]));
      }
    }
    SemanticEntropy semantic = SemanticEntropyFromSimilarities(similarities);
    Entropy lexical = ComputeLexicalEntropy(ms);
    ComponentScores s;
    s.window = ms.source;
    s.semantic_raw = semantic.raw;
    s.semantic = semantic.normalized;
    s.lexical_raw = lexical.raw;
    s.lexical = lexical.normalized;
    s.frequency = FrequencyScore(ms, sample_count);
    s.combined = CombinedScore(s.semantic, s.lexical, s.frequency, config);
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace hallspan
