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

#include "hallspan/detector.h"

#include <string>

#include "doctest.h"
#include "hallspan/embedding.h"
#include "hallspan/error.h"
#include "hallspan/evaluator.h"
#include "hallspan/language_config.h"
#include "hallspan/sampler.h"

namespace hallspan {
namespace {

const std::string kDataDir = HALLSPAN_TEST_DATA_DIR;

struct Fixture {
  std::vector<Record> records = ReadRecords(kDataDir + "/val_mini.jsonl");
  std::map<std::string, SampleSet> samples =
      LoadOfflineSamples(kDataDir + "/val_mini_samples.jsonl");
};

TEST_CASE("planted entities are detected on the mini fixture") {
  Fixture f;
  StubEmbeddingProvider stub;
  for (const Record &r : f.records) {
    DetectionConfig c = DefaultLanguageConfig(r.lang).config;
    PredictionSet p = DetectRecord(r, f.samples.at(r.id), c, stub);
    CHECK(p.id == r.id);
    CHECK(p.lang == r.lang);
    CHECK_NOTHROW(ValidatePrediction(p));
    double iou = CharIou(p.hard_spans, r.hard_labels, r.text_length());
    CAPTURE(r.id);
    CHECK(iou >= 0.5);
  }
}

TEST_CASE("verbatim support yields no hard spans in any language") {
  StubEmbeddingProvider stub;
  for (auto [lang, text] : std::vector<std::pair<std::string, std::string>>{
           {"en", "The Eiffel Tower is in Paris and was finished in 1889."},
           {"zh", "长城是中国古代的军事防御工程，全长两万多公里。"},
           {"hi", "भारत की राजधानी नई दिल्ली है और यह 1911 में बनी।"},
           {"ar", "عاصمة مصر هي القاهرة وتأسست عام 969."}}) {
    Record r;
    r.id = lang;
    r.lang = lang;
    r.model_output_text = text;
    SampleSet s;
    s.samples.assign(20, text);
    PredictionSet p =
        DetectRecord(r, s, DefaultLanguageConfig(lang).config, stub);
    CAPTURE(lang);
    CHECK(p.hard_spans.empty());
    for (const SoftSpan &soft : p.soft_spans) CHECK(soft.prob <= 0.5);
  }
}

TEST_CASE("unsupported answers are flagged as a whole") {
  StubEmbeddingProvider stub;
  Record r;
  r.id = "x";
  r.lang = "en";
  r.model_output_text = "Zorblat quintessence vexes hydrothermal jugglers";
  SampleSet s;
  s.samples.assign(20, "Paris is the capital of France.");
  PredictionSet p = DetectRecord(r, s, DetectionConfig{}, stub);
  REQUIRE(p.hard_spans.size() == 1);
  CHECK(p.hard_spans[0] == CharSpan{0, r.text_length()});
  CHECK(p.soft_spans[0].prob == doctest::Approx(1.0));
}

TEST_CASE("window analysis exposes every window score") {
  Fixture f;
  StubEmbeddingProvider stub;
  const Record &r = f.records.at(0);
  DetectionConfig c;
  WindowAnalysis a = AnalyzeRecord(r, f.samples.at(r.id), c, stub);
  CHECK(a.tokens.tokens().size() == 19);
  CHECK(a.windows.size() == 7);
  for (const ComponentScores &w : a.windows) {
    CHECK(w.combined >= 0.0);
    CHECK(w.combined <= 1.0);
  }
  CHECK(SelectSpans(r, a, c) == DetectRecord(r, f.samples.at(r.id), c, stub));
}

TEST_CASE("detector errors") {
  StubEmbeddingProvider stub;
  Record r;
  r.id = "lonely";
  r.lang = "en";
  r.model_output_text = "some text";
  CHECK_THROWS_WITH_AS(DetectRecord(r, SampleSet{}, DetectionConfig{}, stub),
                       doctest::Contains("lonely"), MissingSamplesError);
  DetectionConfig bad;
  bad.stride = 9;
  SampleSet s;
  s.samples = {"x"};
  CHECK_THROWS_AS(DetectRecord(r, s, bad, stub), ConfigError);
  r.model_output_text = "";
  PredictionSet empty = DetectRecord(r, s, DetectionConfig{}, stub);
  CHECK(empty.hard_spans.empty());
  CHECK(empty.soft_spans.empty());
}

}  // namespace
}  // namespace hallspan
