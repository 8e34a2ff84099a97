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

#include "hallspan/sampler.h"

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <thread>

#include "hallspan/error.h"
#include "http_util.h"

namespace hallspan {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string Getenv(const char *name) {
  const char *value = std::getenv(name);
  return value ? value : "";
}

std::string RenderPrompt(const std::string &tmpl, const std::string &query) {
  std::string out;
  const std::string key = "{query}";
  size_t pos = 0;
  while (true) {
    size_t hit = tmpl.find(key, pos);
    if (hit == std::string::npos) break;
    out.append(tmpl, pos, hit - pos);
    out += query;
    pos = hit + key.size();
  }
  out.append(tmpl, pos, std::string::npos);
  return out;
}

const char *ApiPath(ApiShape api) {
  return api == ApiShape::kChatCompletion ? "/v1/chat/completions"
                                          : "/v1/completions";
}

// Parameters an endpoint may reject; they are dropped rather than failing.
constexpr const char *kOptionalParameters[] = {"top_k", "no_repeat_ngram_size"};

std::string JoinIndices(const std::vector<int> &indices) {
  std::string s;
  for (int i : indices) s += (s.empty() ? "" : ", ") + std::to_string(i);
  return s;
}

}  // namespace

void ValidateProfile(const SamplingProfile &p) {
  std::vector<std::string> problems;
  if (p.n < 1) problems.push_back("n must be >= 1");
  if (!(p.temperature > 0.0)) problems.push_back("temperature must be > 0");
  if (!(p.top_p > 0.0 && p.top_p <= 1.0)) {
    problems.push_back("top_p must be in (0, 1]");
  }
  if (p.top_k < 0) problems.push_back("top_k must be >= 0");
  if (p.max_tokens < 1) problems.push_back("max_tokens must be >= 1");
  if (p.no_repeat_ngram < 0) problems.push_back("no_repeat_ngram must be >= 0");
  if (p.retry_budget < 0) problems.push_back("retry_budget must be >= 0");
  if (!problems.empty()) {
    std::string message = "invalid sampling profile:";
    for (const auto &s : problems) message += "\n  " + s;
    throw ConfigError(message);
  }
}

SamplingProfile ProfileFromEnvironment(SamplingProfile base) {
  if (auto url = Getenv("HALLSPAN_COMPLETION_URL"); !url.empty()) {
    base.endpoint_url = url;
  }
  if (auto model = Getenv("HALLSPAN_COMPLETION_MODEL"); !model.empty()) {
    base.model = model;
  }
  if (auto token = Getenv("HALLSPAN_COMPLETION_TOKEN"); !token.empty()) {
    base.auth_token = token;
  }
  return base;
}

nlohmann::ordered_json ProfileParameters(const SamplingProfile &p) {
  ordered_json params;
  params["temperature"] = p.temperature;
  params["top_p"] = p.top_p;
  if (p.top_k > 0) params["top_k"] = p.top_k;
  params["max_tokens"] = p.max_tokens;
  params["n"] = p.n;
  if (p.no_repeat_ngram > 0) params["no_repeat_ngram_size"] = p.no_repeat_ngram;
  return params;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string ProfileFingerprint(const SamplingProfile &p) {
  ordered_json key;
  key["model"] = p.model;
  key["api"] = p.api == ApiShape::kChatCompletion ? "chat" : "completion";
  key["prompt_template"] = p.prompt_template;
  key["parameters"] = ProfileParameters(p);
  return Sha256Hex(key.dump()).substr(0, 16);
}

SampleCache::SampleCache(std::string directory)
    : directory_(std::move(directory)) {}

std::string SampleCache::PathFor(const std::string &query,
                                 const SamplingProfile &profile) const {
  return (std::filesystem::path(directory_) /
          (Sha256Hex(query).substr(0, 32) + "-" + ProfileFingerprint(profile) +
           ".jsonl"))
      .string();
}

std::optional<SampleSet> SampleCache::Lookup(
    const std::string &query, const SamplingProfile &profile) const {
  std::string path = PathFor(query, profile);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::vector<std::string> lines = ReadLines(path);
  if (lines.size() != 1) {
    throw SamplerError("corrupt cache file " + path);
  }
  try {
    ordered_json entry = ordered_json::parse(lines[0]);
    if (entry.value("query_sha256", "") != Sha256Hex(query)) {
      throw SamplerError("cache file " + path + " belongs to another query");
    }
    return ParseSampleSet(entry);
  } catch (const json::exception &e) {
    throw SamplerError("corrupt cache file " + path + ": " + e.what());
  } catch (const ValidationError &e) {
    throw SamplerError("corrupt cache file " + path + ": " + e.what());
  }
}

void SampleCache::Store(const std::string &query,
                        const SamplingProfile &profile,
                        const SampleSet &samples) const {
  ordered_json entry;
  entry["query_sha256"] = Sha256Hex(query);
  entry["fingerprint"] = ProfileFingerprint(profile);
  entry["samples"] = samples.samples;
  ordered_json provenance;
  provenance["endpoint"] = samples.provenance.endpoint;
  provenance["model"] = samples.provenance.model;
  provenance["parameters"] = samples.provenance.parameters;
  provenance["downgrades"] = samples.provenance.downgrades;
  entry["provenance"] = provenance;
  WriteFileAtomic(PathFor(query, profile), entry.dump() + "\n");
}

SampleSet HttpCompletionClient::Complete(const std::string &query,
                                         const SamplingProfile &profile) {
  ValidateProfile(profile);
  if (profile.endpoint_url.empty()) {
    throw SamplerError("no completion endpoint configured");
  }
  internal::SplitUrl url = internal::ParseUrl(profile.endpoint_url);
  std::string base_path = url.path == "/" ? "" : url.path;
  while (!base_path.empty() && base_path.back() == '/') base_path.pop_back();
  const std::string path = base_path + ApiPath(profile.api);
  const std::string prompt = RenderPrompt(profile.prompt_template, query);

  ordered_json params = ProfileParameters(profile);
  std::vector<std::string> downgrades;
  std::string last_error;
  int failures = 0;
  while (true) {
    ordered_json body;
    body["model"] = profile.model;
    if (profile.api == ApiShape::kChatCompletion) {
      body["messages"] = ordered_json::array(
          {ordered_json{{"role", "user"}, {"content", prompt}}});
    } else {
      body["prompt"] = prompt;
    }
    for (auto &[key, value] : params.items()) body[key] = value;

    auto client = internal::MakeClient(url.origin, profile.timeout,
                                       profile.auth_token);
    auto response = client->Post(path, body.dump(), "application/json");

    bool retryable = false;
    if (!response) {
      last_error = "transport error: " + httplib::to_string(response.error());
      retryable = true;
    } else if (response->status == 429 || response->status >= 500) {
      last_error = "HTTP " + std::to_string(response->status);
      retryable = true;
    }
    if (retryable) {
      if (++failures > profile.retry_budget) {
        throw SamplerError("completion endpoint failed after " +
                           std::to_string(failures) + " attempts: " +
                           last_error);
      }
      std::this_thread::sleep_for(profile.retry_backoff * (1 << (failures - 1)));
      continue;
    }

    if (response->status == 400 || response->status == 422) {
      bool dropped = false;
      for (const char *name : kOptionalParameters) {
        if (params.contains(name) &&
            response->body.find(name) != std::string::npos) {
          params.erase(name);
          downgrades.push_back(std::string(name) +
                               " rejected by endpoint; omitted");
          dropped = true;
        }
      }
      if (dropped) continue;
    }
    if (response->status == 401 || response->status == 403) {
      throw SamplerError("completion endpoint rejected credentials (HTTP " +
                         std::to_string(response->status) + ")");
    }
    if (response->status != 200) {
      throw SamplerError("completion endpoint returned HTTP " +
                         std::to_string(response->status) + ": " +
                         response->body.substr(0, 200));
    }

    std::vector<std::optional<std::string>> texts(profile.n);
    try {
      json reply = json::parse(response->body);
      const json &choices = reply.at("choices");
      for (size_t i = 0; i < choices.size(); ++i) {
        const json &choice = choices[i];
        int index = choice.value("index", static_cast<int>(i));
        if (index < 0 || index >= profile.n) continue;
        if (choice.contains("message")) {
          texts[index] = choice["message"].at("content").get<std::string>();
        } else {
          texts[index] = choice.at("text").get<std::string>();
        }
      }
    } catch (const json::exception &e) {
      throw SamplerError(std::string("unexpected completion response: ") +
                         e.what());
    }
    std::vector<int> missing;
    for (int i = 0; i < profile.n; ++i) {
      if (!texts[i]) missing.push_back(i);
    }
    if (!missing.empty()) {
      throw SamplerError("completion endpoint returned " +
                         std::to_string(profile.n - missing.size()) + " of " +
                         std::to_string(profile.n) +
                         " samples; missing indices: " + JoinIndices(missing));
    }

    SampleSet set;
    for (auto &t : texts) set.samples.push_back(std::move(*t));
    set.provenance.endpoint = url.origin + path;
    set.provenance.model = profile.model;
    set.provenance.parameters = params;
    set.provenance.downgrades = std::move(downgrades);
    return set;
  }
}

SampleSet GenerateSamples(const std::string &query,
                          const SamplingProfile &profile,
                          const SampleCache *cache, CompletionClient *client) {
  ValidateProfile(profile);
  if (cache) {
    if (auto hit = cache->Lookup(query, profile)) return *hit;
  }
  if (!client) {
    throw SamplerError("no cached samples for query (sha256 " +
                       Sha256Hex(query).substr(0, 16) +
                       ") and network access is disabled");
  }
  SampleSet set = client->Complete(query, profile);
  if (static_cast<int>(set.samples.size()) != profile.n) {
    throw SamplerError("client returned " + std::to_string(set.samples.size()) +
                       " samples, expected " + std::to_string(profile.n));
  }
  if (cache) cache->Store(query, profile, set);
  return set;
}

SampleSet ParseSampleSet(const nlohmann::ordered_json &entry) {
  SampleSet set;
  if (!entry.contains("samples") || !entry["samples"].is_array()) {
    throw ValidationError("sample entry needs a \"samples\" list");
  }
  for (const auto &s : entry["samples"]) {
    if (!s.is_string()) throw ValidationError("sample is not a string");
    set.samples.push_back(s.get<std::string>());
  }
  if (auto it = entry.find("provenance"); it != entry.end() && it->is_object()) {
    set.provenance.endpoint = it->value("endpoint", "");
    set.provenance.model = it->value("model", "");
    if (it->contains("parameters")) {
      set.provenance.parameters = (*it)["parameters"];
    }
    if (it->contains("downgrades")) {
      set.provenance.downgrades =
          (*it)["downgrades"].get<std::vector<std::string>>();
    }
  }
  return set;
}

std::map<std::string, SampleSet> LoadOfflineSamples(const std::string &path) {
  std::map<std::string, SampleSet> out;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string where = path + ":" + std::to_string(i + 1);
    ordered_json entry;
    try {
      entry = ordered_json::parse(lines[i]);
    } catch (const json::parse_error &e) {
      throw ParseError(where + ": malformed JSON at byte offset " +
                           std::to_string(e.byte),
                       e.byte);
    }
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_string()) {
      throw ValidationError(where + ": sample entry needs a string \"id\"");
    }
    std::string id = entry["id"].get<std::string>();
    SampleSet set;
    try {
      set = ParseSampleSet(entry);
    } catch (const ValidationError &e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const json::exception &e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!out.emplace(id, std::move(set)).second) {
      throw ValidationError(where + ": duplicate record id '" + id + "'");
    }
  }
  return out;
}

std::string SerializeSampleEntry(const std::string &id,
                                 const SampleSet &samples) {
  ordered_json entry;
  entry["id"] = id;
  entry["samples"] = samples.samples;
  ordered_json provenance;
  provenance["endpoint"] = samples.provenance.endpoint;
  provenance["model"] = samples.provenance.model;
  provenance["parameters"] = samples.provenance.parameters;
  provenance["downgrades"] = samples.provenance.downgrades;
  entry["provenance"] = provenance;
  return entry.dump();
}

}  // namespace hallspan
