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

#include "dae/commands.h"

#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "dae/autolabel.h"
#include "dae/dataio.h"
#include "dae/scorer.h"
#include "json.hpp"
#include "test_util.h"

namespace dae {
namespace {

using testing::ReadFile;
using testing::TempDir;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunDae(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> KeyValues(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const size_t eq = line.find('=');
    if (eq != std::string::npos && line.find(' ') == std::string::npos) {
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  return kv;
}

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const CliResult r = RunDae({"synth", "--out-dir", dir_.File("s"), "--seed",
                             "4", "--pairs", "20", "--beams", "10",
                             "--rerank", "12", "--sentences", "30"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  std::string S(const std::string& name) { return dir_.File("s/" + name); }

  TempDir dir_;
};

TEST(FormatNumberTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatNumber(1.0), "1.0");
  EXPECT_EQ(FormatNumber(0.75), "0.75");
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(1e-20), "1e-20");
}

TEST_F(CommandsTest, BuildDatasetIsByteIdentical) {
  std::vector<std::string> data, meta_text;
  for (int run = 0; run < 2; ++run) {
    const CliResult r = RunDae({"build-dataset", "--paraphrases", S("paraphrases.jsonl"),
                             "--beams", S("beams.jsonl"), "--out",
                             dir_.File("a.jsonl"), "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(KeyValues(r.out)["examples"], "60");  // 20 gold + 10 x (3 + 1)
    data.push_back(ReadFile(dir_.File("a.jsonl")));
    meta_text.push_back(ReadFile(dir_.File("a.jsonl.meta.json")));
  }
  EXPECT_EQ(data[0], data[1]);
  EXPECT_EQ(meta_text[0], meta_text[1]);
  const nlohmann::json meta = nlohmann::json::parse(meta_text[0]);
  EXPECT_EQ(meta["command"], "build-dataset");
  EXPECT_EQ(meta["seed"], 7);
}

TEST_F(CommandsTest, OracleRerankScoresOne) {
  const CliResult r = RunDae({"rerank", "--items", S("rerank.jsonl"), "--scorer", "oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(KeyValues(r.out)["accuracy"], "1.0");
  EXPECT_EQ(KeyValues(r.out)["items"], "12");
}

TEST_F(CommandsTest, ConstantRerankIsReproducible) {
  const CliResult a = RunDae({"rerank", "--items", S("rerank.jsonl"), "--scorer", "constant", "--seed", "0"});
  const CliResult b = RunDae({"rerank", "--items", S("rerank.jsonl"), "--scorer", "constant", "--seed", "0"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(KeyValues(a.out)["ties"], "12");
}

TEST_F(CommandsTest, AgreementOnIdenticalFilesIsOne) {
  ASSERT_EQ(RunDae({"build-dataset", "--paraphrases", S("paraphrases.jsonl"),
                 "--beams", S("beams.jsonl"), "--out", dir_.File("a.jsonl")})
                .code,
            0);
  const CliResult r = RunDae({"agreement", "--auto", dir_.File("a.jsonl"),
                           "--manual", dir_.File("a.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(KeyValues(r.out)["agreement"], "1.0");
}

TEST_F(CommandsTest, TrainEvaluateScoreReport) {
  ASSERT_EQ(RunDae({"augment", "--mode", "swap", "--input", S("sentences.conllu"),
                 "--out", dir_.File("swap.jsonl")})
                .code,
            0);
  const CliResult train = RunDae(
      {"train", "--dataset", dir_.File("swap.jsonl"), "--dev",
       dir_.File("swap.jsonl"), "--checkpoint", dir_.File("ckpt"), "--epochs",
       "2", "--lr", "1e-3", "--dim", "8", "--heads", "2", "--layers", "1",
       "--ffn-dim", "16", "--label-dim", "4"});
  ASSERT_EQ(train.code, 0) << train.err;
  EXPECT_NE(train.out.find("epoch=2 "), std::string::npos) << train.out;
  EXPECT_TRUE(KeyValues(train.out).count("dev_accuracy"));

  const CliResult eval = RunDae({"evaluate", "--dataset", dir_.File("swap.jsonl"),
                              "--checkpoint", dir_.File("ckpt")});
  ASSERT_EQ(eval.code, 0) << eval.err;
  EXPECT_EQ(KeyValues(eval.out)["accuracy"], KeyValues(train.out)["dev_accuracy"]);

  const CliResult score = RunDae({"score", "--checkpoint", dir_.File("ckpt"),
                               "--dataset", dir_.File("swap.jsonl"), "--out",
                               dir_.File("scores.jsonl"), "--pooling", "min"});
  ASSERT_EQ(score.code, 0) << score.err;
  EXPECT_EQ(KeyValues(score.out)["scored"], "30");

  const CliResult report = RunDae({"report", "--checkpoint", dir_.File("ckpt"),
                                "--dataset", dir_.File("swap.jsonl"),
                                "--format", "json", "--limit", "2"});
  ASSERT_EQ(report.code, 0) << report.err;
  std::istringstream lines(report.out);
  std::string first;
  std::getline(lines, first);
  EXPECT_TRUE(nlohmann::json::parse(first).contains("arcs"));
}

TEST_F(CommandsTest, MajorityBaselineMatchesStats) {
  ASSERT_EQ(RunDae({"augment", "--mode", "swap", "--input", S("sentences.conllu"),
                 "--out", dir_.File("swap.jsonl")})
                .code,
            0);
  const auto stats = KeyValues(RunDae({"stats", "--dataset", dir_.File("swap.jsonl")}).out);
  const auto eval = KeyValues(RunDae({"evaluate", "--dataset", dir_.File("swap.jsonl"),
                                   "--baseline", "majority"})
                                  .out);
  EXPECT_EQ(eval.at("accuracy"), stats.at("entailed_ratio"));
}

TEST_F(CommandsTest, ErrorsAreCategorized) {
  testing::WriteFile(dir_.File("bad.jsonl"), "{\"x\": 1}\n");
  const CliResult schema = RunDae({"stats", "--dataset", dir_.File("bad.jsonl")});
  EXPECT_EQ(schema.code, 1);
  EXPECT_EQ(schema.err.rfind("error[SCHEMA]", 0), 0u) << schema.err;

  const CliResult pre = RunDae({"build-dataset", "--paraphrases", S("paraphrases.jsonl"),
                             "--beams", S("beams.jsonl"), "--out",
                             dir_.File("x.jsonl"), "--bottom-m", "9"});
  EXPECT_EQ(pre.code, 1);
  EXPECT_EQ(pre.err.rfind("error[SCHEMA]", 0), 0u) << pre.err;
  EXPECT_NE(pre.err.find("bottom_m"), std::string::npos) << pre.err;

  const CliResult usage = RunDae({"rerank", "--items", S("rerank.jsonl"), "--scorer", "psychic"});
  EXPECT_EQ(usage.code, 2);
  EXPECT_EQ(RunDae({}).code, 2);
  EXPECT_EQ(RunDae({"stats", "--dataset", dir_.File("missing.jsonl")}).code, 2);
}

TEST_F(CommandsTest, ConfigFileGivesDefaultsAndFlagsWin) {
  testing::WriteFile(dir_.File("cfg.toml"), "[rerank]\nscorer = \"oracle\"\n");
  const CliResult from_file = RunDae({"rerank", "--items", S("rerank.jsonl"),
                                   "--config", dir_.File("cfg.toml")});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(KeyValues(from_file.out)["wins"], "12");
  const CliResult flag_wins = RunDae({"rerank", "--items", S("rerank.jsonl"), "--config",
                                   dir_.File("cfg.toml"), "--scorer", "constant"});
  ASSERT_EQ(flag_wins.code, 0) << flag_wins.err;
  EXPECT_EQ(KeyValues(flag_wins.out)["ties"], "12");
}

TEST_F(CommandsTest, IngestConlluSentences) {
  const CliResult r = RunDae({"ingest", "--conllu", S("sentences.conllu"), "--mode",
                           "sentences", "--out", dir_.File("sent.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(KeyValues(r.out)["records"], "30");
}

}  // namespace
}  // namespace dae
