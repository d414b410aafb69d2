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

#include "dae/augment.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "dae/error.h"
#include "dae/synthetic.h"
#include "oracles.h"
#include "test_util.h"

namespace dae {
namespace {

using testing::DogChasedCat;
using testing::MakeSentence;

TEST(WordSwapTest, DogCatSwapLabels) {
  const std::pair<int, int> swap{2, 5};
  const ArcAnnotatedExample ex = WordSwapAt(DogChasedCat(), {&swap, 1});
  EXPECT_EQ(ex.hypothesis.text, "the cat chased the dog .");
  EXPECT_EQ(ex.provenance, Provenance::kWordSwap);
  EXPECT_EQ(ex.annotations,
            (std::vector<ArcAnnotation>{
                {{3, 2, "nsubj"}, Entailment::kNonEntailed},
                {{0, 3, "root"}, Entailment::kEntailed},
                {{3, 5, "obj"}, Entailment::kNonEntailed}}));
}

TEST(WordSwapTest, RandomSwapsMatchOracle) {
  SyntheticCorpus corpus(21);
  for (int i = 0; i < 200; ++i) {
    const ParsedSentence x = corpus.Sentence();
    const ArcAnnotatedExample ex = WordSwap(x, SwapConfig{1, static_cast<uint64_t>(i)});
    EXPECT_EQ(ex.hypothesis.arcs, x.arcs);
    int changed = 0;
    for (int t = 0; t < x.size(); ++t) {
      if (ex.hypothesis.tokens[t].form != x.tokens[t].form) {
        ++changed;
        EXPECT_EQ(ex.hypothesis.tokens[t].pos, x.tokens[t].pos);
      }
    }
    EXPECT_EQ(changed, 2);
    for (const ArcAnnotation& a : ex.annotations) {
      const bool kept = testing::OracleHasArc(x, ex.hypothesis, a.arc);
      EXPECT_EQ(a.gold, kept ? Entailment::kEntailed : Entailment::kNonEntailed);
    }
  }
}

TEST(WordSwapTest, DeterministicUnderSeed) {
  SyntheticCorpus corpus(4);
  const ParsedSentence x = corpus.Sentence();
  EXPECT_EQ(WordSwap(x, SwapConfig{1, 9}), WordSwap(x, SwapConfig{1, 9}));
}

TEST(WordSwapTest, NoEligiblePairIsNoOp) {
  const ParsedSentence x = MakeSentence({{"dogs", "NOUN"}, {"bark", "VERB"}},
                                        {{2, 1, "nsubj"}, {0, 2, "root"}});
  try {
    WordSwap(x, SwapConfig{1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoOp);
  }
  const ParsedSentence same = MakeSentence({{"Dog", "NOUN"}, {"dog", "NOUN"}},
                                           {{0, 1, "root"}, {1, 2, "appos"}});
  EXPECT_THROW(WordSwap(same, SwapConfig{1, 0}), Error);
}

TEST(WordSwapTest, TooManySwapsIsPrecondition) {
  try {
    WordSwap(DogChasedCat(), SwapConfig{2, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
  const std::pair<int, int> self{2, 2};
  EXPECT_THROW(WordSwapAt(DogChasedCat(), {&self, 1}), Error);
}

WordVectors TinyVectors() {
  WordVectors v;
  v.Add("big", {1.0, 0.1});
  v.Add("large", {0.9, 0.2});
  v.Add("house", {0.0, 1.0});
  return v;
}

TEST(SimilarityTest, CosineAndExactMatch) {
  const WordVectors v = TinyVectors();
  const WordSimilarity sim = MakeSimilarity(&v);
  EXPECT_EQ(sim("The", "the"), 1.0);
  const double expected = (0.9 + 0.02) / std::sqrt(1.01 * 0.85);
  EXPECT_NEAR(sim("big", "large"), expected, 1e-12);
  EXPECT_NEAR(sim("BIG", "house"), 0.1 / std::sqrt(1.01), 1e-12);
  EXPECT_EQ(sim("big", "unknown"), 0.0);
  EXPECT_EQ(MakeSimilarity(nullptr)("a", "b"), 0.0);
}

TEST(SimilarityTest, LoadsVectorFile) {
  testing::TempDir dir;
  testing::WriteFile(dir.File("v.txt"), "big 1 0.1\nlarge 0.9 0.2\n\n");
  const WordVectors v = WordVectors::Load(dir.File("v.txt"));
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.dim(), 2);
  testing::WriteFile(dir.File("bad.txt"), "big 1 0.1\nlarge 0.9\n");
  try {
    WordVectors::Load(dir.File("bad.txt"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

ParsedSentence Words(std::initializer_list<testing::Word> words) {
  return MakeSentence(words, {});
}

TEST(AlignWordsTest, InPlaceSynonymHasZeroDisplacement) {
  const WordVectors v = TinyVectors();
  const Alignment a = AlignWords(
      Words({{"a", "DET"}, {"big", "ADJ"}, {"house", "NOUN"}}),
      Words({{"a", "DET"}, {"large", "ADJ"}, {"house", "NOUN"}}),
      MakeSimilarity(&v), 0.5);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(a.coverage, 1.0);
  EXPECT_EQ(a.mean_displacement, 0.0);
}

TEST(AlignWordsTest, ReorderingRaisesDisplacement) {
  const Alignment a = AlignWords(
      Words({{"x", "X"}, {"y", "X"}, {"z", "X"}, {"w", "X"}}),
      Words({{"w", "X"}, {"y", "X"}, {"z", "X"}, {"x", "X"}}),
      MakeSimilarity(nullptr), 0.5);
  EXPECT_EQ(a.coverage, 1.0);
  EXPECT_DOUBLE_EQ(a.mean_displacement, (3.0 / 4 + 3.0 / 4) / 4);
}

TEST(SelectSynonymPairsTest, FiltersByCoverageAndDisplacement) {
  const WordVectors v = TinyVectors();
  const ParsedSentence src = MakeSentence(
      {{"big", "ADJ"}, {"house", "NOUN"}}, {{2, 1, "amod"}, {0, 2, "root"}});
  const ParsedSentence syn = MakeSentence(
      {{"large", "ADJ"}, {"house", "NOUN"}}, {{2, 1, "amod"}, {0, 2, "root"}});
  const ParsedSentence moved = MakeSentence(
      {{"house", "NOUN"}, {"large", "ADJ"}}, {{0, 1, "root"}, {1, 2, "amod"}});
  const ParsedSentence other = MakeSentence(
      {{"red", "ADJ"}, {"car", "NOUN"}}, {{2, 1, "amod"}, {0, 2, "root"}});
  const std::vector<ParaphrasePair> pairs = {
      {src, syn}, {src, moved}, {src, other}};
  const std::vector<ArcAnnotatedExample> out =
      SelectSynonymPairs(pairs, AlignmentConfig{}, MakeSimilarity(&v));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].hypothesis, syn);
  EXPECT_EQ(out[0].provenance, Provenance::kSynonym);
  for (const ArcAnnotation& a : out[0].annotations) {
    EXPECT_EQ(a.gold, Entailment::kEntailed);
  }
}

TEST(RemoveSpanTest, RenumbersAndDropsIncidentArcs) {
  const ParsedSentence out = RemoveSpan(DogChasedCat(), 3, 2);
  EXPECT_EQ(out.text, "the dog chased .");
  EXPECT_EQ(out.arcs, (std::vector<DependencyArc>{
                          {2, 1, "det"}, {3, 2, "nsubj"}, {0, 3, "root"},
                          {3, 4, "punct"}}));
  EXPECT_NO_THROW(ValidateSentence(out));
  EXPECT_THROW(RemoveSpan(DogChasedCat(), 5, 2), Error);
  EXPECT_THROW(RemoveSpan(DogChasedCat(), 0, 0), Error);
}

TEST(HallucinateSpanTest, LostArcsAreNonEntailedOthersUnlabeled) {
  const ArcAnnotatedExample ex = HallucinateSpanAt(DogChasedCat(), 3, 2);
  EXPECT_EQ(ex.hypothesis, DogChasedCat());
  EXPECT_EQ(ex.annotations,
            (std::vector<ArcAnnotation>{
                {{3, 2, "nsubj"}, std::nullopt},
                {{0, 3, "root"}, std::nullopt},
                {{3, 5, "obj"}, Entailment::kNonEntailed}}));
}

TEST(HallucinateSpanTest, RandomSpansAlwaysLabelSomething) {
  SyntheticCorpus corpus(8);
  for (int i = 0; i < 100; ++i) {
    const ParsedSentence x = corpus.Sentence();
    const ArcAnnotatedExample ex = HallucinateSpan(x, i);
    EXPECT_GT(ex.premise.size(), 0);
    EXPECT_LT(ex.premise.size(), x.size());
    EXPECT_GT(ex.NumLabeled(), 0);
    for (const ArcAnnotation& a : ex.annotations) {
      EXPECT_NE(a.gold, Entailment::kEntailed);
    }
  }
  const ParsedSentence tiny = MakeSentence({{"a", "X"}, {"b", "X"}}, {});
  try {
    HallucinateSpan(tiny, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(OverlapTest, UnigramOverlapIsMultisetFraction) {
  const ParsedSentence a = Words({{"the", "X"}, {"cat", "X"}, {"sat", "X"}});
  const ParsedSentence b =
      Words({{"The", "X"}, {"the", "X"}, {"dog", "X"}, {"sat", "X"}});
  EXPECT_DOUBLE_EQ(UnigramOverlap(a, b), 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(UnigramOverlap(b, a), 2.0 / 3.0);
  EXPECT_EQ(UnigramOverlap(a, ParsedSentence{}), 0.0);
}

TEST(OverlapTest, PairsWithBestPartner) {
  const ParsedSentence a = MakeSentence(
      {{"dogs", "NOUN"}, {"bark", "VERB"}}, {{2, 1, "nsubj"}, {0, 2, "root"}});
  const ParsedSentence b = MakeSentence(
      {{"dogs", "NOUN"}, {"run", "VERB"}}, {{2, 1, "nsubj"}, {0, 2, "root"}});
  const ParsedSentence c = MakeSentence(
      {{"birds", "NOUN"}, {"fly", "VERB"}}, {{2, 1, "nsubj"}, {0, 2, "root"}});
  const std::vector<ParsedSentence> corpus = {a, b, c};
  const std::vector<ArcAnnotatedExample> out = HallucinateOverlap(corpus);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].premise, a);
  EXPECT_EQ(out[0].hypothesis, b);
  EXPECT_EQ(out[1].premise, b);
  EXPECT_EQ(out[1].hypothesis, a);
  for (const ArcAnnotatedExample& ex : out) {
    EXPECT_EQ(ex.provenance, Provenance::kHallucinationOverlap);
    for (const ArcAnnotation& ann : ex.annotations) {
      EXPECT_EQ(ann.gold, Entailment::kNonEntailed);
    }
  }
  EXPECT_THROW(HallucinateOverlap(std::vector<ParsedSentence>{a}), Error);
}

}  // namespace
}  // namespace dae
