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

#include "hallspan/commands.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <filesystem>
#include <optional>
#include <set>
#include <thread>

#include "hallspan/datamodel.h"
#include "hallspan/detector.h"
#include "hallspan/error.h"
#include "hallspan/language_config.h"
#include "hallspan/tuner.h"

namespace hallspan {
namespace {

std::ostream &Log(const CommandEnv &env) {
  return env.log ? *env.log : std::cerr;
}

std::ostream &Out(const CommandEnv &env) {
  return env.out ? *env.out : std::cout;
}

// Runs task(i) for every i in [0, count) on `jobs` workers. Results are
// indexed by i, so the output order never depends on scheduling.
template <typename Task>
void RunIndexed(size_t count, int jobs, Task task) {
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto &t : pool) t.join();
}

// Per-record outcome; `error` holds the exception when the record failed.
struct Outcome {
  std::exception_ptr error;
  std::string message;
};

int ReportFailures(const std::vector<std::string> &ids,
                   const std::vector<Outcome> &outcomes, std::ostream &log) {
  int code = kExitOk;
  size_t failed = 0;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].error) continue;
    ++failed;
    log << "  record " << ids[i] << ": " << outcomes[i].message << "\n";
    if (code == kExitOk) {
      try {
        std::rethrow_exception(outcomes[i].error);
      } catch (const std::exception &e) {
        code = ExitCodeFor(e);
      }
    }
  }
  if (failed > 0) {
    log << failed << " of " << outcomes.size() << " records failed\n";
  }
  return code;
}

template <typename Task>
void Capture(Outcome &outcome, Task task) {
  try {
    task();
  } catch (const std::exception &e) {
    outcome.error = std::current_exception();
    outcome.message = e.what();
  }
}

std::vector<Record> LoadRecords(const std::string &path,
                                const std::string &lang) {
  std::vector<Record> records = ReadRecords(path);
  if (lang.empty()) return records;
  std::vector<Record> kept;
  for (Record &r : records) {
    if (r.lang == lang) kept.push_back(std::move(r));
  }
  return kept;
}

class ConfigResolver {
 public:
  explicit ConfigResolver(const RunManifest &manifest) {
    if (!manifest.config_path.empty()) {
      table_ = LanguageConfigTable::Load(manifest.config_path);
    }
    for (const auto &[key, value] : manifest.overrides) {
      nlohmann::json parsed;
      try {
        parsed = nlohmann::json::parse(value);
      } catch (const nlohmann::json::parse_error &) {
        throw ConfigError("override " + key + "=" + value +
                          " is not a JSON value");
      }
      if (!ConfigToJson(DetectionConfig{}).contains(key)) {
        throw ConfigError("unknown config field '" + key + "'");
      }
      overrides_[key] = parsed;
    }
  }

  DetectionConfig For(const std::string &lang) const {
    return ValidateConfig(ConfigFromJson(overrides_, table_.Resolve(lang).config));
  }

 private:
  LanguageConfigTable table_;
  nlohmann::json overrides_ = nlohmann::json::object();
};

void RequirePath(const std::string &path, const char *flag) {
  if (path.empty()) throw ConfigError(std::string(flag) + " is required");
}

void WriteOutput(const std::string &path, const std::string &contents,
                 std::ostream &out) {
  if (path.empty() || path == "-") {
    out << contents;
    return;
  }
  WriteFileAtomic(path, contents);
}

std::map<std::string, SampleSet> LoadSamplesIfAny(const RunManifest &m) {
  if (m.samples_path.empty()) return {};
  return LoadOfflineSamples(m.samples_path);
}

template <typename Body>
int Guarded(const CommandEnv &env, Body body) {
  try {
    return body();
  } catch (const std::exception &e) {
    Log(env) << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
}

}  // namespace

int ExitCodeFor(const std::exception &error) {
  if (dynamic_cast<const ParseError *>(&error) ||
      dynamic_cast<const ValidationError *>(&error)) {
    return kExitMalformedInput;
  }
  if (dynamic_cast<const MissingSamplesError *>(&error)) {
    return kExitMissingSamples;
  }
  if (dynamic_cast<const ScoringError *>(&error)) return kExitProviderFailure;
  if (dynamic_cast<const SamplerError *>(&error)) return kExitSamplerFailure;
  if (dynamic_cast<const MetricError *>(&error)) return kExitMetricFailure;
  if (dynamic_cast<const ConfigError *>(&error)) return kExitConfigError;
  if (dynamic_cast<const std::filesystem::filesystem_error *>(&error) ||
      dynamic_cast<const Error *>(&error)) {
    return kExitIoFailure;
  }
  return kExitUsage;
}

ProviderKind ParseProviderKind(const std::string &name) {
  if (name == "stub") return ProviderKind::kStub;
  if (name == "remote") return ProviderKind::kRemote;
  throw ConfigError("unknown provider '" + name + "' (expected remote or stub)");
}

std::unique_ptr<EmbeddingProvider> MakeProvider(const RunManifest &manifest) {
  if (manifest.provider == ProviderKind::kRemote) {
    return std::make_unique<RemoteEmbeddingProvider>(
        RemoteEmbeddingProvider::OptionsFromEnvironment());
  }
  return std::make_unique<StubEmbeddingProvider>(manifest.stub_dimension);
}

int CmdDetect(const RunManifest &m, const CommandEnv &env) {
  return Guarded(env, [&] {
    RequirePath(m.input_path, "--input");
    RequirePath(m.output_path, "--output");
    if (m.offline && m.samples_path.empty()) {
      throw ConfigError("--offline requires --samples");
    }
    const ConfigResolver configs(m);
    std::vector<Record> records = LoadRecords(m.input_path, m.lang);
    const std::map<std::string, SampleSet> offline = LoadSamplesIfAny(m);

    // Every record must have a sample source before any work starts.
    const bool can_sample = !m.offline && (!m.profile.endpoint_url.empty() ||
                                           !m.cache_dir.empty());
    std::vector<std::string> unresolved;
    for (const Record &r : records) {
      if (!offline.count(r.id) && !r.sample_texts && !can_sample) {
        unresolved.push_back(r.id);
      }
    }
    if (!unresolved.empty()) {
      std::string ids;
      for (const auto &id : unresolved) ids += (ids.empty() ? "" : ", ") + id;
      throw MissingSamplesError("no samples for records: " + ids);
    }

    std::unique_ptr<EmbeddingProvider> owned;
    EmbeddingProvider *provider = env.provider;
    if (!provider) {
      owned = MakeProvider(m);
      provider = owned.get();
    }
    std::optional<SampleCache> cache;
    if (!m.cache_dir.empty()) cache.emplace(m.cache_dir);
    HttpCompletionClient http;
    CompletionClient *client = env.completion_client;
    if (!client && !m.offline && !m.profile.endpoint_url.empty()) client = &http;

    std::vector<std::optional<PredictionSet>> predictions(records.size());
    std::vector<Outcome> outcomes(records.size());
    RunIndexed(records.size(), m.jobs, [&](size_t i) {
      Capture(outcomes[i], [&] {
        const Record &r = records[i];
        SampleSet samples;
        if (auto it = offline.find(r.id); it != offline.end()) {
          samples = it->second;
        } else if (r.sample_texts) {
          samples.samples = *r.sample_texts;
        } else {
          samples = GenerateSamples(r.model_input, m.profile,
                                    cache ? &*cache : nullptr, client);
        }
        predictions[i] =
            DetectRecord(r, samples, configs.For(r.lang), *provider);
      });
    });

    std::string out;
    for (const auto &p : predictions) {
      if (p) out += SerializePrediction(*p) + "\n";
    }
    WriteFileAtomic(m.output_path, out);

    std::vector<std::string> ids;
    for (const Record &r : records) ids.push_back(r.id);
    return ReportFailures(ids, outcomes, Log(env));
  });
}

int CmdEvaluate(const RunManifest &m, const CommandEnv &env) {
  return Guarded(env, [&] {
    RequirePath(m.input_path, "--input");
    RequirePath(m.gold_path, "--gold");
    std::vector<Record> gold = LoadRecords(m.gold_path, m.lang);
    std::vector<PredictionSet> predictions = ReadPredictions(m.input_path);
    if (!m.lang.empty()) {
      std::set<std::string> ids;
      for (const Record &r : gold) ids.insert(r.id);
      std::vector<PredictionSet> kept;
      for (PredictionSet &p : predictions) {
        if (p.lang == m.lang || (p.lang.empty() && ids.count(p.id))) {
          kept.push_back(std::move(p));
        }
      }
      predictions = std::move(kept);
    }

    EvalReport submission = Evaluate(gold, predictions, m.metric);
    std::vector<PredictionSet> none, all;
    for (const Record &r : gold) {
      none.push_back(MarkNone(r));
      all.push_back(MarkAll(r));
    }
    std::vector<std::pair<std::string, EvalReport>> systems;
    systems.emplace_back("Baseline (mark none)", Evaluate(gold, none, m.metric));
    systems.emplace_back("Baseline (mark all)", Evaluate(gold, all, m.metric));
    systems.emplace_back("Submission", submission);

    if (!m.output_path.empty()) {
      WriteFileAtomic(m.output_path, ReportJsonl(submission));
    }
    WriteOutput(m.summary_path, SummaryTable(systems), Out(env));
    return kExitOk;
  });
}

int CmdSample(const RunManifest &m, const CommandEnv &env) {
  return Guarded(env, [&] {
    RequirePath(m.input_path, "--input");
    RequirePath(m.output_path, "--output");
    ValidateProfile(m.profile);
    if (m.offline && m.cache_dir.empty()) {
      throw ConfigError("--offline sampling requires --cache-dir");
    }
    std::vector<Record> records = LoadRecords(m.input_path, m.lang);
    std::optional<SampleCache> cache;
    if (!m.cache_dir.empty()) cache.emplace(m.cache_dir);
    HttpCompletionClient http;
    CompletionClient *client = nullptr;
    if (!m.offline) {
      client = env.completion_client ? env.completion_client : &http;
    }

    std::vector<std::optional<SampleSet>> sets(records.size());
    std::vector<Outcome> outcomes(records.size());
    RunIndexed(records.size(), m.jobs, [&](size_t i) {
      Capture(outcomes[i], [&] {
        sets[i] = GenerateSamples(records[i].model_input, m.profile,
                                  cache ? &*cache : nullptr, client);
      });
    });

    std::string out;
    std::vector<std::string> ids;
    for (size_t i = 0; i < records.size(); ++i) {
      ids.push_back(records[i].id);
      if (sets[i]) out += SerializeSampleEntry(records[i].id, *sets[i]) + "\n";
    }
    WriteFileAtomic(m.output_path, out);
    return ReportFailures(ids, outcomes, Log(env));
  });
}

int CmdTune(const RunManifest &m, const CommandEnv &env) {
  return Guarded(env, [&] {
    RequirePath(m.input_path, "--input");
    RequirePath(m.output_path, "--output");
    GridSpec base_grid;
    if (!m.grid_path.empty()) {
      std::ifstream in(m.grid_path);
      if (!in) throw Error("cannot open " + m.grid_path);
      try {
        base_grid = GridFromJson(nlohmann::json::parse(in));
      } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(m.grid_path + ": malformed JSON at byte offset " +
                             std::to_string(e.byte),
                         e.byte);
      }
    }
    base_grid.correlation = m.metric;
    const ConfigResolver configs(m);
    std::vector<Record> records = LoadRecords(m.input_path, m.lang);

    std::map<std::string, SampleSet> samples = LoadSamplesIfAny(m);
    for (const Record &r : records) {
      if (!samples.count(r.id) && r.sample_texts) {
        samples[r.id].samples = *r.sample_texts;
      }
    }

    std::unique_ptr<EmbeddingProvider> owned;
    EmbeddingProvider *provider = env.provider;
    if (!provider) {
      owned = MakeProvider(m);
      provider = owned.get();
    }

    std::vector<std::string> langs;
    for (const Record &r : records) {
      if (std::find(langs.begin(), langs.end(), r.lang) == langs.end()) {
        langs.push_back(r.lang);
      }
    }
    std::sort(langs.begin(), langs.end());

    LanguageConfigTable tuned;
    std::map<std::string, GridResult> best;
    for (const std::string &lang : langs) {
      GridSpec grid = base_grid;
      grid.lang = lang;
      std::vector<GridResult> ranked = GridSearch(
          records, samples, grid, configs.For(lang), *provider, m.jobs);
      size_t count = 0;
      for (const Record &r : records) count += r.lang == lang;
      tuned.Set({lang, ranked.front().config,
                 "tuned on " + std::to_string(count) + " records"});
      best[lang] = ranked.front();
    }
    if (m.lang.empty()) FillUntunedLanguages(tuned);

    WriteFileAtomic(m.output_path, tuned.Serialize());
    WriteOutput(m.summary_path, TunedTable(tuned, best), Out(env));
    return kExitOk;
  });
}

}  // namespace hallspan
