// Copyright 2026 The DAE Factuality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dae/dataio.h"

#include <gtest/gtest.h>

#include "dae/error.h"
#include "test_util.h"

namespace dae {
namespace {

using testing::DogChasedCat;
using testing::TempDir;

ArcAnnotatedExample SwapExample() {
  ArcAnnotatedExample ex;
  ex.premise = DogChasedCat();
  ex.hypothesis = DogChasedCat();
  std::swap(ex.hypothesis.tokens[1].form, ex.hypothesis.tokens[4].form);
  ex.hypothesis.text = JoinForms(ex.hypothesis.tokens);
  ex.annotations = {{{3, 2, "nsubj"}, Entailment::kNonEntailed},
                    {{0, 3, "root"}, Entailment::kEntailed},
                    {{3, 5, "obj"}, std::nullopt}};
  ex.provenance = Provenance::kWordSwap;
  return ex;
}

TEST(DataIoTest, ExampleJsonRoundTrip) {
  const ArcAnnotatedExample ex = SwapExample();
  const nlohmann::ordered_json j = ExampleToJson(ex);
  EXPECT_EQ(j["annotations"][0]["gold"], 0);
  EXPECT_EQ(j["annotations"][1]["gold"], 1);
  EXPECT_TRUE(j["annotations"][2]["gold"].is_null());
  EXPECT_EQ(j["provenance"], "word_swap");
  EXPECT_EQ(ExampleFromJson(nlohmann::json::parse(j.dump())), ex);
}

TEST(DataIoTest, FileRoundTripIsExact) {
  TempDir dir;
  std::vector<ArcAnnotatedExample> examples;
  for (int i = 0; i < 20; ++i) {
    ArcAnnotatedExample ex = SwapExample();
    ex.provenance = static_cast<Provenance>(i % 7);
    if (i % 3 == 0) ex.hypothesis.tokens[0].lemma = "the";
    examples.push_back(ex);
  }
  WriteDataset(examples, dir.File("d.jsonl"));
  EXPECT_EQ(ReadDataset(dir.File("d.jsonl")), examples);
  const std::string bytes = testing::ReadFile(dir.File("d.jsonl"));
  WriteDataset(ReadDataset(dir.File("d.jsonl")), dir.File("e.jsonl"));
  EXPECT_EQ(testing::ReadFile(dir.File("e.jsonl")), bytes);
}

TEST(DataIoTest, ProvenanceNamesRoundTrip) {
  for (int p = 0; p < 7; ++p) {
    const Provenance v = static_cast<Provenance>(p);
    EXPECT_EQ(ParseProvenance(ProvenanceName(v)), v);
  }
  EXPECT_THROW(ParseProvenance("oracle"), Error);
}

void ExpectSchemaError(const std::string& line) {
  TempDir dir;
  testing::WriteFile(dir.File("bad.jsonl"), line + "\n");
  try {
    ReadDataset(dir.File("bad.jsonl"));
    FAIL() << "accepted: " << line;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema) << e.what();
  }
}

TEST(DataIoTest, RejectsMalformedRecords) {
  nlohmann::json good = nlohmann::json::parse(ExampleToJson(SwapExample()).dump());
  ExpectSchemaError("{not json");

  nlohmann::json bad_label = good;
  bad_label["annotations"][0]["gold"] = 2;
  ExpectSchemaError(bad_label.dump());

  nlohmann::json text_label = good;
  text_label["annotations"][0]["gold"] = "yes";
  ExpectSchemaError(text_label.dump());

  nlohmann::json missing = good;
  missing.erase("provenance");
  ExpectSchemaError(missing.dump());

  nlohmann::json foreign_arc = good;
  foreign_arc["annotations"][0]["head"] = 5;
  ExpectSchemaError(foreign_arc.dump());

  nlohmann::json excluded_arc = good;
  excluded_arc["annotations"][0] = {
      {"head", 2}, {"child", 1}, {"label", "det"}, {"gold", 1}};
  ExpectSchemaError(excluded_arc.dump());

  nlohmann::json bad_index = good;
  bad_index["premise"]["tokens"][0]["i"] = 4;
  ExpectSchemaError(bad_index.dump());
}

TEST(DataIoTest, ErrorNamesRecordNumber) {
  TempDir dir;
  const std::string ok = ExampleToJson(SwapExample()).dump();
  testing::WriteFile(dir.File("d.jsonl"), ok + "\n\n" + ok + "\n[1]\n");
  try {
    ReadDataset(dir.File("d.jsonl"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("record 3"), std::string::npos)
        << e.what();
  }
}

TEST(DataIoTest, MissingFileIsIoError) {
  try {
    ReadDataset("/nonexistent/x.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(DataIoTest, BeamAndParaphraseRoundTrip) {
  TempDir dir;
  BeamRecord record{DogChasedCat(), DogChasedCat(),
                    {DogChasedCat(), SwapExample().hypothesis}};
  WriteBeamRecords(std::vector<BeamRecord>{record}, dir.File("b.jsonl"));
  const std::vector<BeamRecord> back = ReadBeamRecords(dir.File("b.jsonl"));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].candidates, record.candidates);
  EXPECT_EQ(back[0].beam_size(), 2);

  std::vector<ParaphrasePair> pairs = {{DogChasedCat(), SwapExample().hypothesis}};
  WriteParaphrasePairs(pairs, dir.File("p.jsonl"));
  const std::vector<ParaphrasePair> pback = ReadParaphrasePairs(dir.File("p.jsonl"));
  ASSERT_EQ(pback.size(), 1u);
  EXPECT_EQ(pback[0].gold, pairs[0].gold);
}

TEST(DataIoTest, StatsCountLabels) {
  std::vector<ArcAnnotatedExample> examples = {SwapExample(), SwapExample()};
  const DatasetStats stats = ComputeStats(examples);
  EXPECT_EQ(stats.examples, 2);
  EXPECT_EQ(stats.entailed, 2);
  EXPECT_EQ(stats.non_entailed, 2);
  EXPECT_EQ(stats.unlabeled, 2);
  EXPECT_DOUBLE_EQ(stats.EntailedRatio(), 0.5);
  EXPECT_DOUBLE_EQ(stats.EntailedRatioAllArcs(), 2.0 / 6.0);
  EXPECT_EQ(SwapExample().NumLabeled(), 2);
  EXPECT_DOUBLE_EQ(ComputeStats({}).EntailedRatio(), 0.0);
}

}  // namespace
}  // namespace dae
