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

#include "hallspan/tuner.h"

#include <algorithm>
#include <cstdio>
#include <future>
#include <tuple>

#include "hallspan/detector.h"
#include "hallspan/error.h"

namespace hallspan {
namespace {

std::string JoinIds(const std::vector<std::string> &ids) {
  std::string s;
  for (const auto &id : ids) s += (s.empty() ? "" : ", ") + id;
  return s;
}

double Objective(const GridSpec &grid, double iou, double cor) {
  switch (grid.objective) {
    case TuningObjective::kIou:
      return iou;
    case TuningObjective::kCor:
      return cor;
    case TuningObjective::kWeighted:
      return grid.iou_weight * iou + (1.0 - grid.iou_weight) * cor;
  }
  return iou;
}

GridResult Summarize(const GridSpec &grid, const DetectionConfig &config,
                     const EvalReport &report) {
  GridResult r;
  r.config = config;
  size_t defined = 0;
  for (const RecordScore &s : report.records) {
    r.mean_iou += s.iou;
    if (s.cor.defined) {
      r.mean_cor += s.cor.value;
      ++defined;
    }
  }
  if (!report.records.empty()) {
    r.mean_iou /= static_cast<double>(report.records.size());
  }
  if (defined > 0) r.mean_cor /= static_cast<double>(defined);
  r.objective = Objective(grid, r.mean_iou, r.mean_cor);
  return r;
}

std::vector<Record> SelectRecords(std::span<const Record> records,
                                  const std::map<std::string, SampleSet> &samples,
                                  const GridSpec &grid) {
  std::vector<Record> selected;
  std::vector<std::string> no_gold, no_samples;
  for (const Record &r : records) {
    if (!grid.lang.empty() && r.lang != grid.lang) continue;
    if (!r.has_gold) no_gold.push_back(r.id);
    if (!samples.count(r.id)) no_samples.push_back(r.id);
    selected.push_back(r);
  }
  if (!no_gold.empty()) {
    throw ValidationError("records without gold labels: " + JoinIds(no_gold));
  }
  if (!no_samples.empty()) {
    throw MissingSamplesError("records without samples: " +
                              JoinIds(no_samples));
  }
  return selected;
}

using AnalysisKey = std::tuple<int, int, double, double, double>;

AnalysisKey KeyOf(const DetectionConfig &c) {
  return {c.window_size, c.stride, c.alpha, c.beta, c.gamma};
}

// Runs `task(i)` for i in [0, count) on up to `jobs` threads.
template <typename Task>
void ParallelFor(size_t count, int jobs, Task task) {
  const size_t width = static_cast<size_t>(std::max(jobs, 1));
  for (size_t begin = 0; begin < count; begin += width) {
    std::vector<std::future<void>> running;
    for (size_t i = begin; i < std::min(count, begin + width); ++i) {
      running.push_back(std::async(std::launch::async, task, i));
    }
    for (auto &f : running) f.get();
  }
}

}  // namespace

GridSpec GridFromJson(const nlohmann::json &j) {
  GridSpec grid;
  auto read = [&](const char *key, auto &field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
      it->get_to(field);
    } catch (const nlohmann::json::exception &) {
      throw ConfigError(std::string("grid field '") + key +
                        "' has the wrong type");
    }
  };
  read("window_size", grid.window_sizes);
  read("stride", grid.strides);
  read("score_threshold", grid.score_thresholds);
  read("min_span_length", grid.min_span_lengths);
  read("boundary_threshold", grid.boundary_thresholds);
  read("weights", grid.weights);
  read("iou_weight", grid.iou_weight);
  read("lang", grid.lang);
  if (auto it = j.find("objective"); it != j.end()) {
    std::string name = it->get<std::string>();
    if (name == "iou") {
      grid.objective = TuningObjective::kIou;
    } else if (name == "cor") {
      grid.objective = TuningObjective::kCor;
    } else if (name == "weighted") {
      grid.objective = TuningObjective::kWeighted;
    } else {
      throw ConfigError("unknown tuning objective '" + name + "'");
    }
  }
  if (auto it = j.find("metric"); it != j.end()) {
    grid.correlation = ParseCorrelationMethod(it->get<std::string>());
  }
  return grid;
}

std::vector<DetectionConfig> ExpandGrid(const GridSpec &grid,
                                        const DetectionConfig &base) {
  std::vector<std::array<double, 3>> weights = grid.weights;
  if (weights.empty()) weights.push_back({base.alpha, base.beta, base.gamma});
  std::vector<DetectionConfig> configs;
  for (int w : grid.window_sizes) {
    for (int t : grid.strides) {
      if (t > w) continue;
      for (double lambda : grid.score_thresholds) {
        for (int msl : grid.min_span_lengths) {
          for (double bt : grid.boundary_thresholds) {
            for (const auto &abg : weights) {
              DetectionConfig c = base;
              c.window_size = w;
              c.stride = t;
              c.score_threshold = lambda;
              c.min_span_length = msl;
              c.boundary_threshold = bt;
              c.alpha = abg[0];
              c.beta = abg[1];
              c.gamma = abg[2];
              configs.push_back(ValidateConfig(c));
            }
          }
        }
      }
    }
  }
  return configs;
}

GridResult EvaluateConfig(std::span<const Record> records,
                          const std::map<std::string, SampleSet> &samples,
                          const DetectionConfig &config, const GridSpec &grid,
                          EmbeddingProvider &provider) {
  std::vector<Record> selected = SelectRecords(records, samples, grid);
  std::vector<PredictionSet> predictions;
  for (const Record &r : selected) {
    predictions.push_back(
        DetectRecord(r, samples.at(r.id), config, provider));
  }
  return Summarize(grid, config,
                   Evaluate(selected, predictions, grid.correlation));
}

std::vector<GridResult> GridSearch(
    std::span<const Record> records,
    const std::map<std::string, SampleSet> &samples, const GridSpec &grid,
    const DetectionConfig &base, EmbeddingProvider &provider, int jobs) {
  std::vector<DetectionConfig> configs = ExpandGrid(grid, base);
  if (configs.empty()) throw ConfigError("grid has no valid configuration");
  std::vector<Record> selected = SelectRecords(records, samples, grid);

  // Group grid points by the parameters the window analysis depends on.
  std::map<AnalysisKey, std::vector<size_t>> groups;
  for (size_t i = 0; i < configs.size(); ++i) {
    groups[KeyOf(configs[i])].push_back(i);
  }
  std::vector<std::vector<size_t>> group_list;
  for (auto &[key, members] : groups) group_list.push_back(members);

  std::vector<GridResult> results(configs.size());
  ParallelFor(group_list.size(), jobs, [&](size_t g) {
    const std::vector<size_t> &members = group_list[g];
    const DetectionConfig &first = configs[members.front()];
    std::vector<WindowAnalysis> analyses;
    analyses.reserve(selected.size());
    for (const Record &r : selected) {
      analyses.push_back(AnalyzeRecord(r, samples.at(r.id), first, provider));
    }
    for (size_t index : members) {
      std::vector<PredictionSet> predictions;
      predictions.reserve(selected.size());
      for (size_t k = 0; k < selected.size(); ++k) {
        predictions.push_back(
            SelectSpans(selected[k], analyses[k], configs[index]));
      }
      results[index] =
          Summarize(grid, configs[index],
                    Evaluate(selected, predictions, grid.correlation));
    }
  });

  std::stable_sort(results.begin(), results.end(),
                   [](const GridResult &a, const GridResult &b) {
                     if (a.objective != b.objective) {
                       return a.objective > b.objective;
                     }
                     if (a.config.window_size != b.config.window_size) {
                       return a.config.window_size < b.config.window_size;
                     }
                     if (a.config.stride != b.config.stride) {
                       return a.config.stride < b.config.stride;
                     }
                     return a.config.score_threshold >
                            b.config.score_threshold;
                   });
  return results;
}

void FillUntunedLanguages(LanguageConfigTable &tuned) {
  for (const std::string &lang : UntunedLanguages()) {
    if (tuned.Contains(lang)) continue;
    std::string nearest = NearestTunedLanguage(lang);
    LanguageConfig entry;
    entry.lang = lang;
    if (tuned.Contains(nearest)) {
      entry.config = tuned.entries().at(nearest).config;
      entry.provenance =
          "approximated from tuned " + nearest + " (no validation data)";
    } else {
      entry = DefaultLanguageConfig(lang);
    }
    tuned.Set(std::move(entry));
  }
}

std::string TunedTable(const LanguageConfigTable &table,
                       const std::map<std::string, GridResult> &best) {
  std::string out =
      "Language  w  t  lambda  MSL  BT    objective  provenance\n";
  char line[256];
  for (const auto &[lang, entry] : table.entries()) {
    const DetectionConfig &c = entry.config;
    auto it = best.find(lang);
    std::string objective =
        it == best.end() ? "-" : std::to_string(it->second.objective);
    if (objective.size() > 8) objective.resize(8);
    std::snprintf(line, sizeof(line), "%-8s  %d  %d  %-6.2f  %-3d  %-4.2f  %-9s  %s\n",
                  lang.c_str(), c.window_size, c.stride, c.score_threshold,
                  c.min_span_length, c.boundary_threshold, objective.c_str(),
                  entry.provenance.c_str());
    out += line;
  }
  return out;
}

}  // namespace hallspan
