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

#ifndef HALLSPAN_COMMANDS_H_
#define HALLSPAN_COMMANDS_H_

#include <exception>
#include <map>
#include <memory>
#include <ostream>
#include <string>

#include "hallspan/embedding.h"
#include "hallspan/evaluator.h"
#include "hallspan/sampler.h"

namespace hallspan {

// Process exit codes of the CLI commands.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitMalformedInput = 2,
  kExitMissingSamples = 3,
  kExitProviderFailure = 4,
  kExitSamplerFailure = 5,
  kExitMetricFailure = 6,
  kExitConfigError = 7,
  kExitIoFailure = 8,
};

int ExitCodeFor(const std::exception &error);

enum class ProviderKind { kStub, kRemote };

ProviderKind ParseProviderKind(const std::string &name);

struct RunManifest {
  std::string input_path;
  std::string output_path;
  // Per-language config file (JSONL); built-in defaults when empty.
  std::string config_path;
  // key=value DetectionConfig overrides applied to every language.
  std::map<std::string, std::string> overrides;
  // Only records of this language are processed when non-empty.
  std::string lang;
  ProviderKind provider = ProviderKind::kStub;
  size_t stub_dimension = 256;
  // Offline samples file (JSONL of id + samples).
  std::string samples_path;
  bool offline = false;
  std::string cache_dir;
  int jobs = 1;
  CorrelationMethod metric = CorrelationMethod::kSpearman;
  // evaluate: gold records; tune: optional grid file.
  std::string gold_path;
  std::string grid_path;
  // evaluate/tune: human-readable table; printed to CommandEnv::out if empty.
  std::string summary_path;
  SamplingProfile profile;
};

// Overrides and collaborators that tests substitute. Null members select
// the production implementations.
struct CommandEnv {
  // Diagnostics; std::cerr when null.
  std::ostream *log = nullptr;
  // Summary tables without a --summary path; std::cout when null.
  std::ostream *out = nullptr;
  EmbeddingProvider *provider = nullptr;
  CompletionClient *completion_client = nullptr;
};

// Each command returns an ExitCode and never throws for data or service
// errors; those are reported on env.log.
int CmdDetect(const RunManifest &manifest, const CommandEnv &env = {});
int CmdEvaluate(const RunManifest &manifest, const CommandEnv &env = {});
int CmdSample(const RunManifest &manifest, const CommandEnv &env = {});
int CmdTune(const RunManifest &manifest, const CommandEnv &env = {});

std::unique_ptr<EmbeddingProvider> MakeProvider(const RunManifest &manifest);

}  // namespace hallspan

#endif  // HALLSPAN_COMMANDS_H_
