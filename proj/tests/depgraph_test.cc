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

#include "dae/depgraph.h"

#include <algorithm>
#include <cctype>

#include <gtest/gtest.h>

#include "dae/error.h"
#include "dae/random.h"
#include "test_util.h"

namespace dae {
namespace {

using testing::MakeSentence;

// Independent re-statement of the exclusion rule.
bool OracleExcluded(const std::string& label) {
  const std::string base = label.substr(0, label.find(':'));
  for (const char* x :
       {"punct", "det", "case", "aux", "auxpass", "dep", "cop", "mark"}) {
    if (base == x) return true;
  }
  return false;
}

ParsedSentence RandomSentence(Rng& rng) {
  static const std::vector<std::string> kForms = {"The", "cat", "Sat", "on",
                                                  "mat", "A",   "dog", "ran"};
  static const std::vector<std::string> kLabels = {
      "nsubj", "obj",    "punct",   "det",  "case", "aux:pass", "nmod:in",
      "amod",  "conj:and", "dep",   "cop",  "mark", "advmod",   "root"};
  ParsedSentence s;
  const int n = static_cast<int>(UniformInt(rng, 1, 8));
  for (int i = 1; i <= n; ++i) {
    s.tokens.push_back(
        Token{i, kForms[UniformInt(rng, 0, kForms.size() - 1)], "X", ""});
  }
  const int arcs = static_cast<int>(UniformInt(rng, 0, 10));
  for (int k = 0; k < arcs; ++k) {
    const int child = static_cast<int>(UniformInt(rng, 1, n));
    int head = static_cast<int>(UniformInt(rng, 0, n));
    if (head == child) head = 0;
    s.arcs.push_back(
        DependencyArc{head, child, kLabels[UniformInt(rng, 0, kLabels.size() - 1)]});
  }
  s.text = JoinForms(s.tokens);
  return s;
}

TEST(FilterSemanticArcsTest, DropsExcludedRelations) {
  ParsedSentence s = MakeSentence(
      {{"he", "PRON"}, {"ran", "VERB"}, {"a", "DET"}, {"mile", "NOUN"},
       {".", "PUNCT"}},
      {{2, 1, "nsubj"}, {2, 5, "punct"}, {4, 3, "det"}});
  EXPECT_EQ(FilterSemanticArcs(s),
            (std::vector<DependencyArc>{{2, 1, "nsubj"}}));
}

TEST(FilterSemanticArcsTest, EmptyInput) {
  EXPECT_TRUE(FilterSemanticArcs(ParsedSentence{}).empty());
}

TEST(FilterSemanticArcsTest, SubtypesUseBaseRelation) {
  ParsedSentence s = MakeSentence(
      {{"book", "NOUN"}, {"was", "AUX"}, {"read", "VERB"}, {"in", "ADP"},
       {"class", "NOUN"}},
      {{3, 1, "nsubj:pass"},
       {3, 2, "aux:pass"},
       {0, 3, "root"},
       {5, 4, "case"},
       {3, 5, "nmod:in"}});
  std::vector<DependencyArc> oracle;
  for (const DependencyArc& a : s.arcs) {
    if (!OracleExcluded(a.label)) oracle.push_back(a);
  }
  EXPECT_EQ(FilterSemanticArcs(s), oracle);
  EXPECT_EQ(oracle, (std::vector<DependencyArc>{{3, 1, "nsubj:pass"},
                                                {0, 3, "root"},
                                                {3, 5, "nmod:in"}}));
}

TEST(FilterSemanticArcsTest, AllListedRelationsExcluded) {
  for (const char* label :
       {"punct", "det", "case", "aux", "auxpass", "dep", "cop", "mark",
        "det:predet", "mark:rel"}) {
    EXPECT_TRUE(IsExcludedRelation(label)) << label;
  }
  for (const char* label : {"root", "nsubj", "amod", "nmod:poss", "determiner",
                            "auxiliary", "conj:and"}) {
    EXPECT_FALSE(IsExcludedRelation(label)) << label;
  }
  EXPECT_EQ(BaseRelation("obl:tmod"), "obl");
  EXPECT_EQ(BaseRelation("obl"), "obl");
}

TEST(FilterSemanticArcsTest, RandomPropertiesHold) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const ParsedSentence s = RandomSentence(rng);
    const std::vector<DependencyArc> once = FilterSemanticArcs(s);
    ParsedSentence again = s;
    again.arcs = once;
    EXPECT_EQ(FilterSemanticArcs(again), once);  // idempotent
    std::vector<DependencyArc> oracle;
    for (const DependencyArc& a : s.arcs) {
      if (!OracleExcluded(a.label)) oracle.push_back(a);
    }
    EXPECT_EQ(once, oracle);
    EXPECT_LE(MakeArcSet(s).size(), once.size());
  }
}

TEST(ArcKeyTest, AmodExample) {
  ParsedSentence s = MakeSentence(
      {{"the", "DET"}, {"military", "ADJ"}, {"coup", "NOUN"}, {"failed", "VERB"}},
      {{3, 1, "det"}, {3, 2, "amod"}, {4, 3, "nsubj"}, {0, 4, "root"}});
  EXPECT_EQ(MakeArcKey({3, 2, "amod"}, s), (ArcKey{"coup", "military", "amod"}));
  EXPECT_EQ(RenderArc({3, 2, "amod"}, s), "amod(coup→military)");
}

TEST(ArcKeyTest, LowercasesForms) {
  ParsedSentence s =
      MakeSentence({{"The", "DET"}, {"Cat", "NOUN"}, {"sat", "VERB"}},
                   {{2, 1, "det"}, {3, 2, "nsubj"}, {0, 3, "root"}});
  EXPECT_EQ(MakeArcKey({3, 2, "nsubj"}, s), (ArcKey{"sat", "cat", "nsubj"}));
  EXPECT_EQ(MakeArcKey({0, 3, "root"}, s), (ArcKey{"ROOT", "sat", "root"}));
}

TEST(ArcKeyTest, DeterministicAcrossCopies) {
  const ParsedSentence a = testing::DogChasedCat();
  const ParsedSentence b = testing::DogChasedCat();
  for (const DependencyArc& arc : a.arcs) {
    EXPECT_EQ(MakeArcKey(arc, a), MakeArcKey(arc, b));
  }
}

TEST(ArcKeyTest, KeepsFullSubtypedLabel) {
  ParsedSentence s = MakeSentence({{"sat", "VERB"}, {"mat", "NOUN"}},
                                  {{1, 2, "obl:on"}});
  EXPECT_EQ(MakeArcKey({1, 2, "obl:on"}, s).label, "obl:on");
}

TEST(ArcKeyTest, OutOfRangeIsStructuralError) {
  const ParsedSentence s = testing::DogChasedCat();
  try {
    MakeArcKey({9, 2, "nsubj"}, s);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStructural);
  }
  EXPECT_THROW(s.FormAt(-1), Error);
  EXPECT_EQ(s.FormAt(0), "ROOT");
}

TEST(ArcKeyTest, UppercasedCopyHasSameKeys) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ParsedSentence s = RandomSentence(rng);
    ParsedSentence upper = s;
    for (Token& t : upper.tokens) {
      std::transform(t.form.begin(), t.form.end(), t.form.begin(),
                     [](unsigned char c) { return std::toupper(c); });
    }
    EXPECT_EQ(MakeArcSet(s), MakeArcSet(upper));
  }
}

TEST(ArcKeyTest, LemmaOptionIsOffByDefault) {
  ParsedSentence s = MakeSentence({{"dogs", "NOUN"}, {"ran", "VERB"}},
                                  {{2, 1, "nsubj"}});
  s.tokens[0].lemma = "dog";
  s.tokens[1].lemma = "run";
  EXPECT_EQ(MakeArcKey(s.arcs[0], s), (ArcKey{"ran", "dogs", "nsubj"}));
  EXPECT_EQ(MakeArcKey(s.arcs[0], s, ArcKeyOptions{true}),
            (ArcKey{"run", "dog", "nsubj"}));
}

TEST(ArcSetTest, DuplicatesCollapse) {
  ParsedSentence s = MakeSentence(
      {{"cats", "NOUN"}, {"and", "CCONJ"}, {"dogs", "NOUN"}},
      {{1, 3, "conj:and"}, {1, 3, "conj:and"}, {3, 2, "cc"}});
  EXPECT_EQ(FilterSemanticArcs(s).size(), 3u);
  EXPECT_EQ(MakeArcSet(s).size(), 2u);
}

TEST(ArcSetTest, FiltersPunctuation) {
  ParsedSentence s = MakeSentence(
      {{"birds", "NOUN"}, {"sing", "VERB"}, {".", "PUNCT"}},
      {{2, 1, "nsubj"}, {0, 2, "root"}, {2, 3, "punct"}});
  EXPECT_EQ(MakeArcSet(s), (ArcKeySet{{"sing", "birds", "nsubj"},
                                      {"ROOT", "sing", "root"}}));
}

TEST(ValidateSentenceTest, RejectsBrokenSentences) {
  ParsedSentence ok = testing::DogChasedCat();
  EXPECT_NO_THROW(ValidateSentence(ok));

  ParsedSentence self_loop = ok;
  self_loop.arcs.push_back({2, 2, "dep"});
  EXPECT_THROW(ValidateSentence(self_loop), Error);

  ParsedSentence gap = ok;
  gap.tokens[2].index = 7;
  EXPECT_THROW(ValidateSentence(gap), Error);

  ParsedSentence empty_form = ok;
  empty_form.tokens[0].form.clear();
  EXPECT_THROW(ValidateSentence(empty_form), Error);

  ParsedSentence out_of_range = ok;
  out_of_range.arcs.push_back({3, 12, "obj"});
  EXPECT_THROW(ValidateSentence(out_of_range), Error);
}

}  // namespace
}  // namespace dae
