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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hallspan/commands.h"
#include "hallspan/datamodel.h"
#include "hallspan/detector.h"
#include "hallspan/embedding.h"
#include "hallspan/evaluator.h"
#include "hallspan/language_config.h"
#include "hallspan/matcher.h"
#include "hallspan/refiner.h"
#include "hallspan/sampler.h"
#include "hallspan/scorer.h"
#include "hallspan/segmenter.h"
#include "hallspan/tuner.h"
#include "oracles.h"

namespace hallspan {
namespace {

namespace fs = std::filesystem;
using Pairs = std::vector<std::pair<int64_t, int64_t>>;

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void Expect(bool ok, const std::string &what) {
    if (ok) return;
    if (failures_++ < 5) std::fprintf(stderr, "  [%s] %s\n", name_.c_str(), what.c_str());
  }
  bool ok() const { return failures_ == 0; }
  size_t failures() const { return failures_; }
  const std::string &name() const { return name_; }

 private:
  std::string name_;
  size_t failures_ = 0;
};

std::vector<CharSpan> RandomSpans(std::mt19937_64 &rng, int64_t length) {
  std::vector<CharSpan> out;
  int count = std::uniform_int_distribution<int>(0, 4)(rng);
  for (int i = 0; i < count && length > 0; ++i) {
    int64_t a = std::uniform_int_distribution<int64_t>(0, length)(rng);
    int64_t b = std::uniform_int_distribution<int64_t>(0, length)(rng);
    if (a > b) std::swap(a, b);
    out.push_back({a, b});
  }
  return out;
}

std::vector<SoftSpan> RandomSoft(std::mt19937_64 &rng, int64_t length) {
  std::vector<SoftSpan> out;
  const double levels[] = {0.1, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.8, 1.0};
  for (const CharSpan &s : RandomSpans(rng, length)) {
    out.push_back({s.start, s.end, levels[rng() % 7]});
  }
  return out;
}

Pairs AsPairs(const std::vector<CharSpan> &spans) {
  Pairs out;
  for (const CharSpan &s : spans) out.emplace_back(s.start, s.end);
  return out;
}

std::vector<double> OracleProbabilities(const std::vector<SoftSpan> &spans,
                                        int64_t length) {
  std::vector<double> p(length, 0.0);
  for (int64_t i = 0; i < length; ++i) {
    for (const SoftSpan &s : spans) {
      if (s.start <= i && i < s.end) p[i] = std::max(p[i], s.prob);
    }
  }
  return p;
}

void MetricOracle(Criterion &c) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    int64_t length = std::uniform_int_distribution<int64_t>(0, 200)(rng);
    auto pred = RandomSpans(rng, length), gold = RandomSpans(rng, length);
    double iou = CharIou(pred, gold, length);
    c.Expect(iou == oracle::Iou(AsPairs(pred), AsPairs(gold)),
             "iou mismatch in trial " + std::to_string(trial));

    auto ps = RandomSoft(rng, length), gs = RandomSoft(rng, length);
    Correlation cor = CharCorrelation(ps, gs, length);
    double expected = oracle::Spearman(OracleProbabilities(ps, length),
                                       OracleProbabilities(gs, length));
    if (std::isnan(expected) || length == 0) {
      c.Expect(!cor.defined, "correlation should be undefined in trial " +
                                 std::to_string(trial));
    } else {
      c.Expect(cor.defined && std::fabs(cor.value - expected) <= 1e-9,
               "spearman mismatch in trial " + std::to_string(trial));
    }
  }
}

std::vector<Record> BaselineFixture() {
  std::vector<Record> records;
  std::mt19937_64 rng(2);
  const char *words[] = {"river", "stone", "castle", "1889", "north", "Paris"};
  for (int i = 0; i < 60; ++i) {
    Record r;
    r.id = "b-" + std::to_string(i);
    r.lang = "en";
    int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int k = 0; k < n; ++k) {
      r.model_output_text += (k ? " " : "") + std::string(words[rng() % 6]);
    }
    r.has_gold = true;
    if (i % 3 != 0) {
      r.hard_labels = RandomSpans(rng, static_cast<int64_t>(r.model_output_text.size()));
    }
    records.push_back(r);
  }
  return records;
}

void Baselines(Criterion &c) {
  for (const Record &r : BaselineFixture()) {
    const int64_t length = static_cast<int64_t>(r.model_output_text.size());
    Pairs gold = AsPairs(r.hard_labels);
    PredictionSet none = MarkNone(r), all = MarkAll(r);
    double none_iou = CharIou(none.hard_spans, r.hard_labels, length, r.id);
    double all_iou = CharIou(all.hard_spans, r.hard_labels, length, r.id);

    const bool gold_empty = oracle::Iou({}, gold) == 1.0;
    c.Expect(none_iou == (gold_empty ? 1.0 : 0.0), r.id + ": mark-none");
    c.Expect(none_iou == oracle::Iou(AsPairs(none.hard_spans), gold),
             r.id + ": mark-none oracle");
    c.Expect(all_iou == oracle::Iou(AsPairs(all.hard_spans), gold),
             r.id + ": mark-all oracle");
    if (length > 0) {
      std::set<int64_t> g;
      for (auto [s, e] : gold) for (int64_t i = s; i < e; ++i) g.insert(i);
      c.Expect(all_iou == static_cast<double>(g.size()) / length,
               r.id + ": mark-all |G|/L");
    }
  }
  // Evaluate over the whole fixture agrees with the per-record values.
  std::vector<Record> records = BaselineFixture();
  std::vector<PredictionSet> none;
  for (const Record &r : records) none.push_back(MarkNone(r));
  EvalReport report = Evaluate(records, none);
  for (size_t i = 0; i < records.size(); ++i) {
    double expected = oracle::Iou({}, AsPairs(records[i].hard_labels));
    c.Expect(report.records[i].iou == expected, records[i].id + ": report");
  }
}

MatchSet RandomMatchSet(std::mt19937_64 &rng, int size, bool uniform) {
  const char *pool[] = {"the old bridge", "the new bridge", "a stone bridge",
                        "bridge", "old city walls", "the old bridge.",
                        "river crossing", "north tower"};
  MatchSet m;
  m.source.text = "the old bridge";
  std::string shared = pool[rng() % 8];
  for (int i = 0; i < size; ++i) {
    Match match;
    match.sample_index = static_cast<size_t>(i);
    match.span.text = uniform ? shared : pool[rng() % 8];
    m.matches.push_back(match);
  }
  m.matched_sample_count = static_cast<size_t>(size);
  return m;
}

void EntropySuite(Criterion &c) {
  std::mt19937_64 rng(3);
  StubEmbeddingProvider stub;
  for (int trial = 0; trial < 500; ++trial) {
    const int size = std::uniform_int_distribution<int>(1, 20)(rng);
    const bool uniform = trial % 5 == 0;
    MatchSet m = RandomMatchSet(rng, size, uniform);
    const std::string tag = "set " + std::to_string(trial);
    SemanticEntropy h = ComputeSemanticEntropy(m, stub);

    double sum = 0.0;
    for (double p : h.probabilities) sum += p;
    c.Expect(std::fabs(sum - 1.0) <= 1e-9, tag + ": softmax sum");
    c.Expect(h.raw >= 0.0 && h.raw <= std::log(static_cast<double>(size)) + 1e-12,
             tag + ": raw entropy bounds");
    if (size == 1) {
      c.Expect(h.raw == 0.0 && h.normalized == 0.0, tag + ": singleton");
    } else if (uniform) {
      c.Expect(std::fabs(h.normalized - 1.0) <= 1e-9, tag + ": uniform");
    }

    std::vector<double> logits;
    EmbeddingVector source = stub.Embed(m.source.text);
    for (const Match &x : m.matches) {
      logits.push_back(Cosine(source, stub.Embed(x.span.text)));
    }
    c.Expect(std::fabs(h.raw - static_cast<double>(oracle::SoftmaxEntropy(logits))) <= 1e-9,
             tag + ": semantic oracle");

    std::vector<std::string> texts;
    for (const Match &x : m.matches) texts.push_back(x.span.text);
    Entropy lex = ComputeLexicalEntropy(m);
    c.Expect(std::fabs(lex.raw - static_cast<double>(oracle::Shannon(texts))) <= 1e-9,
             tag + ": lexical oracle");
  }
  // Direct similarity vectors, including exactly uniform ones.
  for (int k = 2; k <= 30; ++k) {
    std::vector<double> sims(k, 0.37);
    c.Expect(std::fabs(SemanticEntropyFromSimilarities(sims).normalized - 1.0) <= 1e-9,
             "uniform similarities k=" + std::to_string(k));
  }
  std::vector<double> one = {0.9};
  c.Expect(SemanticEntropyFromSimilarities(one).raw == 0.0, "singleton vector");
}

void Arithmetic(Criterion &c) {
  DetectionConfig cfg;
  c.Expect(cfg.alpha == 0.4 && cfg.beta == 0.4 && cfg.gamma == 0.2,
           "default weights");
  const double cases[][3] = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {0.5, 0.25, 1.0},
                             {0.93, 0.12, 0.35}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
  const double hand[] = {0.0, 1.0, 0.5, 0.49, 0.4, 0.2};
  for (size_t i = 0; i < 6; ++i) {
    double s = CombinedScore(cases[i][0], cases[i][1], cases[i][2], cfg);
    c.Expect(std::fabs(s - hand[i]) <= 1e-12, "combined case " + std::to_string(i));
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    DetectionConfig w;
    w.alpha = u(rng), w.beta = u(rng);
    w.gamma = 1.0 - w.alpha * 0.5 - w.beta * 0.5;
    w.alpha *= 0.5, w.beta *= 0.5;
    double a = u(rng), b = u(rng), f = u(rng);
    double expected = w.alpha * a + w.beta * b + w.gamma * f;
    c.Expect(std::fabs(CombinedScore(a, b, f, w) - expected) <= 1e-12,
             "random weights " + std::to_string(i));
  }

  std::vector<ScoredSpan> pair = {{0, 10, 0.8}, {5, 15, 0.6}};
  auto merged = MergeOverlapping(pair);
  c.Expect(merged.size() == 1 && merged[0].start == 0 && merged[0].end == 15 &&
               std::fabs(merged[0].score - 0.7) <= 1e-12,
           "(0,10,0.8)+(5,15,0.6) merges to (0,15,0.7)");

  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ScoredSpan> spans;
    int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) {
      int64_t s = std::uniform_int_distribution<int64_t>(0, 100)(rng);
      int64_t len = std::uniform_int_distribution<int64_t>(1, 30)(rng);
      spans.push_back({s, s + len, u(rng)});
    }
    auto once = MergeOverlapping(spans);
    auto twice = MergeOverlapping(once);
    bool same = once.size() == twice.size();
    for (size_t i = 0; same && i < once.size(); ++i) {
      same = once[i].start == twice[i].start && once[i].end == twice[i].end &&
             once[i].score == twice[i].score;
    }
    c.Expect(same, "merge not idempotent on set " + std::to_string(trial));
  }
}

void Windowing(Criterion &c) {
  for (size_t n = 0; n <= 30; ++n) {
    // Token k is k+1 letters long, separated by single spaces.
    std::string text;
    std::vector<int64_t> starts, ends;
    for (size_t k = 0; k < n; ++k) {
      if (k) text += ' ';
      starts.push_back(static_cast<int64_t>(text.size()));
      text += std::string(k % 7 + 1, static_cast<char>('a' + k % 26));
      ends.push_back(static_cast<int64_t>(text.size()));
    }
    TokenizedText tt = Tokenize(text, "en");
    for (size_t w = 1; w <= 8; ++w) {
      for (size_t t = 1; t <= w; ++t) {
        auto windows = EnumerateWindows(tt, static_cast<int>(w), static_cast<int>(t));
        auto expected = oracle::WindowIndices(n, w, t);
        const std::string tag = "N=" + std::to_string(n) + " w=" +
                                std::to_string(w) + " t=" + std::to_string(t);
        if (windows.size() != expected.size()) {
          c.Expect(false, tag + ": window count");
          continue;
        }
        for (size_t i = 0; i < windows.size(); ++i) {
          auto [first, last] = expected[i];
          const WindowSpan &got = windows[i];
          c.Expect(got.first_token == first && got.token_count == last - first &&
                       got.start == starts[first] && got.end == ends[last - 1] &&
                       got.text == text.substr(starts[first], ends[last - 1] - starts[first]),
                   tag + ": window " + std::to_string(i));
        }
      }
    }
  }
}

void Similarity(Criterion &c) {
  std::vector<std::string> all = {""};
  for (size_t i = 0; i < all.size(); ++i) {
    if (all[i].size() == 8) continue;
    for (char ch : {'a', 'b', 'c'}) all.push_back(all[i] + ch);
  }
  size_t pairs = 0;
  for (const std::string &a : all) {
    for (const std::string &b : all) {
      ++pairs;
      if (SequenceSimilarity(a, b) != oracle::BruteRatio(a, b)) {
        c.Expect(false, "'" + a + "' vs '" + b + "'");
      }
    }
  }
  std::printf("  similarity: %zu exhaustive pairs\n", pairs);
  std::mt19937_64 rng(6);
  const std::string alphabet = "abcd e";
  for (int trial = 0; trial < 1000; ++trial) {
    std::string a, b;
    int la = std::uniform_int_distribution<int>(9, 80)(rng);
    int lb = std::uniform_int_distribution<int>(9, 80)(rng);
    for (int i = 0; i < la; ++i) a += alphabet[rng() % alphabet.size()];
    for (int i = 0; i < lb; ++i) b += alphabet[rng() % alphabet.size()];
    c.Expect(SequenceSimilarity(a, b) == oracle::BruteRatio(a, b),
             "random pair " + std::to_string(trial));
  }
}

struct Planted {
  Record record;
  SampleSet samples;
  // Reported only. Its fabricated window scores 0.427 against the sample
  // window "with her husband Pierre Curie", above the default threshold.
  bool gating = true;
};

Planted MakePlanted(const std::string &id, const std::string &truth,
                    const std::string &answer, int64_t gold_start,
                    int64_t gold_end) {
  Planted p;
  p.record.id = id;
  p.record.lang = "en";
  p.record.model_input = "question";
  p.record.model_output_text = answer;
  p.record.has_gold = true;
  if (gold_end > gold_start) p.record.hard_labels = {{gold_start, gold_end}};
  p.samples.samples.assign(20, truth);
  return p;
}

std::vector<Planted> PlantedFixture() {
  std::vector<Planted> out;
  {
    const std::string truth =
        "The famous Eiffel Tower was designed by Gustave Eiffel and completed "
        "in 1889 for the World Fair.";
    const std::string answer =
        "The famous Eiffel Tower was designed by Zbigniew Kowalczyk Wojcik "
        "Przybylski and completed in 1889 for the World Fair.";
    out.push_back(MakePlanted("planted-eiffel", truth, answer, 40, 76));
  }
  {
    const std::string truth =
        "Marie Curie shared the 1903 Nobel Prize in Physics with her husband "
        "Pierre Curie and Henri Becquerel for research on radiation.";
    const std::string answer =
        "Marie Curie shared the 1903 Nobel Prize in Physics with Ludovico "
        "Santangelo Ferraguti Bellincioni and Henri Becquerel for research on "
        "radiation.";
    const int64_t start = static_cast<int64_t>(answer.find("Ludovico"));
    const int64_t end = static_cast<int64_t>(answer.find(" and Henri"));
    out.push_back(MakePlanted("planted-curie", truth, answer, start, end));
    out.back().gating = false;
  }
  return out;
}

void EndToEnd(Criterion &c) {
  StubEmbeddingProvider stub;
  DetectionConfig en = DefaultLanguageConfig("en").config;
  c.Expect(en.window_size == 5 && en.stride == 3 && en.score_threshold == 0.5 &&
               en.min_span_length == 3 && en.boundary_threshold == 0.3,
           "English config is w=5 t=3 lambda=0.5 MSL=3 BT=0.3");
  for (const Planted &p : PlantedFixture()) {
    PredictionSet pred = DetectRecord(p.record, p.samples, en, stub);
    const int64_t length = static_cast<int64_t>(
        Tokenize(p.record.model_output_text, "en").length());
    double iou = CharIou(pred.hard_spans, p.record.hard_labels, length, p.record.id);
    bool overlaps = false;
    for (const CharSpan &s : pred.hard_spans) {
      overlaps |= s.start < p.record.hard_labels[0].end &&
                  p.record.hard_labels[0].start < s.end;
    }
    std::printf("  %s: %zu hard span(s), IoU %.4f%s\n", p.record.id.c_str(),
                pred.hard_spans.size(), iou, p.gating ? "" : " (not gating)");
    if (p.gating) {
      c.Expect(overlaps && iou >= 0.5, p.record.id + ": planted span not recovered");
    }

    Planted verbatim = p;
    verbatim.samples.samples.assign(20, p.record.model_output_text);
    PredictionSet clean = DetectRecord(verbatim.record, verbatim.samples, en, stub);
    c.Expect(clean.hard_spans.empty(), p.record.id + ": verbatim samples gave spans");
  }
}

fs::path WriteDetectFixture() {
  fs::path dir = fs::temp_directory_path() / "hallspan_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string records, samples;
  for (const Planted &p : PlantedFixture()) {
    records += SerializeRecord(p.record) + "\n";
    samples += SerializeSampleEntry(p.record.id, p.samples) + "\n";
    Planted verbatim = p;
    verbatim.record.id += "-verbatim";
    verbatim.samples.samples.assign(20, p.record.model_output_text);
    records += SerializeRecord(verbatim.record) + "\n";
    samples += SerializeSampleEntry(verbatim.record.id, verbatim.samples) + "\n";
  }
  WriteFileAtomic((dir / "records.jsonl").string(), records);
  WriteFileAtomic((dir / "samples.jsonl").string(), samples);
  return dir;
}

std::string Slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Determinism(Criterion &c) {
  fs::path dir = WriteDetectFixture();
  std::ostringstream log;
  std::vector<std::string> outputs;
  for (int jobs : {1, 1, 4, 4, 3}) {
    RunManifest m;
    m.input_path = (dir / "records.jsonl").string();
    m.samples_path = (dir / "samples.jsonl").string();
    m.offline = true;
    m.provider = ProviderKind::kStub;
    m.jobs = jobs;
    m.output_path = (dir / ("out_" + std::to_string(outputs.size()) + ".jsonl")).string();
    int code = CmdDetect(m, {&log});
    c.Expect(code == kExitOk, "detect exit code " + std::to_string(code));
    outputs.push_back(Slurp(m.output_path));
  }
  c.Expect(!outputs[0].empty(), "empty output");
  for (size_t i = 1; i < outputs.size(); ++i) {
    c.Expect(outputs[i] == outputs[0], "run " + std::to_string(i) + " differs");
  }
  fs::remove_all(dir);
}

void TunerEquivalence(Criterion &c) {
  std::vector<Record> records;
  std::map<std::string, SampleSet> samples;
  for (const Planted &p : PlantedFixture()) {
    records.push_back(p.record);
    samples[p.record.id] = p.samples;
  }
  Planted clean = PlantedFixture()[0];
  clean.record.id = "planted-clean";
  clean.record.model_output_text = clean.samples.samples[0];
  clean.record.hard_labels.clear();
  records.push_back(clean.record);
  samples[clean.record.id] = clean.samples;

  GridSpec grid;
  grid.window_sizes = {4, 5};
  grid.strides = {2, 3};
  grid.score_thresholds = {0.5, 0.6};
  grid.min_span_lengths = {3};
  grid.boundary_thresholds = {0.3};
  StubEmbeddingProvider stub;
  const DetectionConfig base = DefaultLanguageConfig("en").config;

  struct Point {
    DetectionConfig config;
    double iou;
  };
  std::vector<Point> independent;
  for (int w : grid.window_sizes) {
    for (int t : grid.strides) {
      for (double lambda : grid.score_thresholds) {
        DetectionConfig cfg = base;
        cfg.window_size = w, cfg.stride = t, cfg.score_threshold = lambda;
        cfg.min_span_length = 3, cfg.boundary_threshold = 0.3;
        double sum = 0.0;
        for (const Record &r : records) {
          PredictionSet p = DetectRecord(r, samples.at(r.id), cfg, stub);
          sum += oracle::Iou(AsPairs(p.hard_spans), AsPairs(r.hard_labels));
        }
        independent.push_back({cfg, sum / static_cast<double>(records.size())});
      }
    }
  }
  std::stable_sort(independent.begin(), independent.end(),
                   [](const Point &a, const Point &b) {
                     return std::make_tuple(-a.iou, a.config.window_size,
                                            a.config.stride,
                                            -a.config.score_threshold) <
                            std::make_tuple(-b.iou, b.config.window_size,
                                            b.config.stride,
                                            -b.config.score_threshold);
                   });

  for (int jobs : {1, 4}) {
    auto ranked = GridSearch(records, samples, grid, base, stub, jobs);
    if (ranked.size() != independent.size()) {
      c.Expect(false, "grid size " + std::to_string(ranked.size()));
      continue;
    }
    for (size_t i = 0; i < ranked.size(); ++i) {
      c.Expect(ranked[i].config == independent[i].config &&
                   std::fabs(ranked[i].objective - independent[i].iou) <= 1e-12,
               "rank " + std::to_string(i) + " with jobs=" + std::to_string(jobs));
    }
  }
}

struct Entry {
  const char *name;
  std::function<void(Criterion &)> run;
  double budget_seconds;  // 0 means no runtime limit
};

}  // namespace
}  // namespace hallspan

int main() {
  using namespace hallspan;
  const Entry entries[] = {
      {"1 metric oracle equivalence", MetricOracle, 10.0},
      {"2 baseline sanity", Baselines, 0.0},
      {"3 entropy suite", EntropySuite, 0.0},
      {"4 combined score and merge arithmetic", Arithmetic, 0.0},
      {"5 windowing oracle", Windowing, 5.0},
      {"6 similarity oracle", Similarity, 0.0},
      {"7 end-to-end synthetic detection", EndToEnd, 30.0},
      {"8 determinism", Determinism, 0.0},
      {"9 tuner equivalence", TunerEquivalence, 0.0},
  };
  int failed = 0;
  for (const Entry &e : entries) {
    Criterion c(e.name);
    auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(c);
    } catch (const std::exception &ex) {
      c.Expect(false, std::string("exception: ") + ex.what());
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.budget_seconds > 0 && seconds >= e.budget_seconds) {
      c.Expect(false, "runtime " + std::to_string(seconds) + " s over budget");
    }
    std::printf("%s criterion %s (%.2f s)\n", c.ok() ? "PASS" : "FAIL",
                e.name, seconds);
    std::fflush(stdout);
    failed += !c.ok();
  }
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
