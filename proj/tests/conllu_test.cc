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

#include "dae/conllu.h"

#include <sstream>

#include <gtest/gtest.h>

#include "dae/error.h"
#include "test_util.h"

namespace dae {
namespace {

constexpr char kTwoSentences[] =
    "# sent_id = 1\n"
    "# text = The coup failed.\n"
    "1\tThe\tthe\tDET\t2:det\n"
    "2\tcoup\tcoup\tNOUN\t3:nsubj\n"
    "3\tfailed\tfail\tVERB\t0:root\n"
    "4\t.\t.\tPUNCT\t3:punct\n"
    "\n"
    "#text = He left\n"
    "1\tHe\the\tPRON\t2:nsubj\n"
    "2\tleft\tleave\tVERB\t0:root\n";

TEST(ConlluTest, ReadsTwoSentences) {
  const std::vector<ParsedSentence> s = ParseConlluString(kTwoSentences);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].text, "The coup failed.");
  EXPECT_EQ(s[1].text, "He left");
  EXPECT_EQ(s[0].size(), 4);
  EXPECT_EQ(s[0].tokens[2], (Token{3, "failed", "VERB", "fail"}));
  EXPECT_EQ(s[0].arcs.size(), 4u);
}

TEST(ConlluTest, RootLine) {
  const std::vector<ParsedSentence> full = ParseConlluString(
      "1 a a DET 3:det\n2 military military ADJ 3:amod\n"
      "3 coup coup NOUN 0:root\n");
  ASSERT_EQ(full.size(), 1u);
  EXPECT_EQ(full[0].tokens[2].index, 3);
  EXPECT_EQ(full[0].tokens[2].form, "coup");
  EXPECT_EQ(full[0].arcs[2], (DependencyArc{0, 3, "root"}));
}

TEST(ConlluTest, EmptyInput) {
  EXPECT_TRUE(ParseConlluString("").empty());
  EXPECT_TRUE(ParseConlluString("\n\n").empty());
}

TEST(ConlluTest, MultiHeadAndSubtypedLabels) {
  const std::vector<ParsedSentence> s = ParseConlluString(
      "1\tcats\tcat\tNOUN\t4:nsubj\n"
      "2\tand\tand\tCCONJ\t3:cc\n"
      "3\tdogs\tdog\tNOUN\t1:conj:and|4:nsubj\n"
      "4\tsleep\tsleep\tVERB\t0:root\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].arcs, (std::vector<DependencyArc>{{4, 1, "nsubj"},
                                                   {3, 2, "cc"},
                                                   {1, 3, "conj:and"},
                                                   {4, 3, "nsubj"},
                                                   {0, 4, "root"}}));
}

TEST(ConlluTest, FullLayoutFallsBackToBasicHead) {
  const std::vector<ParsedSentence> s = ParseConlluString(
      "1\tDogs\tdog\tNOUN\tNNS\t_\t2\tnsubj\t_\t_\n"
      "2\tbark\tbark\tVERB\tVBP\t_\t0\troot\t0:root\t_\n"
      "2-3\t_\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].size(), 2);
  EXPECT_EQ(s[0].text, "Dogs bark");
  EXPECT_EQ(s[0].arcs, (std::vector<DependencyArc>{{2, 1, "nsubj"},
                                                   {0, 2, "root"}}));
}

TEST(ConlluTest, MalformedLineReportsLineNumber) {
  try {
    ParseConlluString("1\tok\tok\tX\t0:root\n2\tbad\n");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos)
        << e.what();
  }
  EXPECT_THROW(ParseConlluString("1\ta\ta\tX\tnohead\n"), Error);
  EXPECT_THROW(ParseConlluString("1\ta\ta\tX\t7:obj\n"), Error);
}

TEST(ConlluTest, MissingFileIsIoError) {
  try {
    ReadConllu("/nonexistent/dir/file.conllu");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(ConlluTest, WriteThenReadRoundTrips) {
  const std::vector<ParsedSentence> original = ParseConlluString(kTwoSentences);
  std::ostringstream out;
  WriteConllu(original, out);
  EXPECT_EQ(ParseConlluString(out.str()), original);
}

}  // namespace
}  // namespace dae
