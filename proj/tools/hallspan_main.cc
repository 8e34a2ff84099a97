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

// Command-line entry point: sample, detect, evaluate and tune.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hallspan/commands.h"
#include "hallspan/error.h"

namespace {

using hallspan::RunManifest;

struct Flags {
  std::string provider = "stub";
  std::string metric = "spearman";
  std::string api = "chat";
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App *cmd, RunManifest &m) {
  cmd->add_option("--input", m.input_path, "Input JSONL file")->required();
  cmd->add_option("--output", m.output_path, "Output file");
  cmd->add_option("--lang", m.lang, "Only process records of this language");
  cmd->add_option("--jobs", m.jobs, "Parallel workers")
      ->check(CLI::PositiveNumber);
}

void AddDetection(CLI::App *cmd, RunManifest &m, Flags &f) {
  cmd->add_option("--config", m.config_path, "Per-language config JSONL");
  cmd->add_option("--set", f.overrides,
                  "Config override key=value (repeatable)");
  cmd->add_option("--provider", f.provider, "Embedding provider")
      ->check(CLI::IsMember({"remote", "stub"}));
  cmd->add_option("--samples", m.samples_path, "Offline samples JSONL");
  cmd->add_flag("--offline", m.offline, "Never contact a completion endpoint");
  cmd->add_option("--cache-dir", m.cache_dir, "Sample cache directory");
}

void AddSampling(CLI::App *cmd, RunManifest &m, Flags &f) {
  cmd->add_option("--endpoint", m.profile.endpoint_url,
                  "Completion endpoint base URL");
  cmd->add_option("--model", m.profile.model, "Completion model id");
  cmd->add_option("--api", f.api, "Endpoint shape")
      ->check(CLI::IsMember({"chat", "completion"}));
  cmd->add_option("--num-samples", m.profile.n, "Samples per query");
  cmd->add_option("--prompt-template", m.profile.prompt_template,
                  "Prompt wrapper; {query} is replaced by the input");
}

int Finish(const RunManifest &base, const Flags &f,
           int (*command)(const RunManifest &, const hallspan::CommandEnv &)) {
  RunManifest m = base;
  try {
    m.provider = hallspan::ParseProviderKind(f.provider);
    m.metric = hallspan::ParseCorrelationMethod(f.metric);
    for (const std::string &kv : f.overrides) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw hallspan::ConfigError("--set expects key=value, got " + kv);
      }
      m.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    m.profile = hallspan::ProfileFromEnvironment(m.profile);
    if (!base.profile.endpoint_url.empty()) {
      m.profile.endpoint_url = base.profile.endpoint_url;
    }
    m.profile.api = f.api == "chat" ? hallspan::ApiShape::kChatCompletion
                                    : hallspan::ApiShape::kCompletion;
  } catch (const hallspan::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return hallspan::ExitCodeFor(e);
  }
  return command(m, hallspan::CommandEnv{});
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sampling-consistency hallucination span detector"};
  app.require_subcommand(1);

  RunManifest m;
  Flags f;

  auto *sample = app.add_subcommand("sample", "Draw and cache samples");
  AddCommon(sample, m);
  AddSampling(sample, m, f);
  sample->add_option("--cache-dir", m.cache_dir, "Sample cache directory");
  sample->add_flag("--offline", m.offline, "Serve from the cache only");

  auto *detect = app.add_subcommand("detect", "Predict hallucination spans");
  AddCommon(detect, m);
  AddDetection(detect, m, f);
  AddSampling(detect, m, f);

  auto *evaluate = app.add_subcommand("evaluate", "Score predictions");
  AddCommon(evaluate, m);
  evaluate->add_option("--gold", m.gold_path, "Gold JSONL")->required();
  evaluate->add_option("--metric", f.metric, "Correlation coefficient")
      ->check(CLI::IsMember({"spearman", "pearson"}));
  evaluate->add_option("--summary", m.summary_path,
                       "Summary table path (stdout when omitted)");

  auto *tune = app.add_subcommand("tune", "Grid-search per-language configs");
  AddCommon(tune, m);
  AddDetection(tune, m, f);
  tune->add_option("--grid", m.grid_path, "Grid JSON file");
  tune->add_option("--metric", f.metric, "Correlation coefficient")
      ->check(CLI::IsMember({"spearman", "pearson"}));
  tune->add_option("--summary", m.summary_path,
                   "Leaderboard path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (sample->parsed()) return Finish(m, f, hallspan::CmdSample);
  if (detect->parsed()) return Finish(m, f, hallspan::CmdDetect);
  if (evaluate->parsed()) return Finish(m, f, hallspan::CmdEvaluate);
  if (tune->parsed()) return Finish(m, f, hallspan::CmdTune);
  return hallspan::kExitUsage;
}
