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

// Seeded datasets and models shared by the unit tests and the acceptance
// binary.

#ifndef DAE_TESTS_FIXTURES_H_
#define DAE_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "dae/augment.h"
#include "dae/error.h"
#include "dae/model.h"
#include "dae/synthetic.h"

namespace dae::testing {

// `swaps` word-swap examples plus the synonym paraphrases among `synonyms`
// candidates that pass alignment filtering.
inline std::vector<ArcAnnotatedExample> SwapSynonymCorpus(uint64_t seed,
                                                          int swaps,
                                                          int synonyms) {
  SyntheticCorpus corpus(seed);
  std::vector<ArcAnnotatedExample> out;
  for (int i = 0; static_cast<int>(out.size()) < swaps; ++i) {
    try {
      out.push_back(WordSwap(
          corpus.Sentence(),
          SwapConfig{1, SplitSeed(seed, "swap/" + std::to_string(i))}));
    } catch (const Error&) {
    }
  }
  const WordVectors vectors = SyntheticCorpus::Vectors(32, seed);
  std::vector<ParaphrasePair> pairs;
  for (int i = 0; i < synonyms; ++i) pairs.push_back(corpus.SynonymParaphrase());
  for (ArcAnnotatedExample& ex :
       SelectSynonymPairs(pairs, AlignmentConfig{}, MakeSimilarity(&vectors))) {
    out.push_back(std::move(ex));
  }
  return out;
}

// Synonym examples restricted to arcs whose key is absent from the premise,
// i.e. arcs touching a replaced word. Examples left empty are dropped.
inline std::vector<ArcAnnotatedExample> ChangedSynonymArcs(
    const std::vector<ArcAnnotatedExample>& data) {
  std::vector<ArcAnnotatedExample> out;
  for (const ArcAnnotatedExample& ex : data) {
    if (ex.provenance != Provenance::kSynonym) continue;
    const ArcKeySet premise = MakeArcSet(ex.premise);
    ArcAnnotatedExample kept = ex;
    kept.annotations.clear();
    for (const ArcAnnotation& a : ex.annotations) {
      if (!premise.contains(MakeArcKey(a.arc, ex.hypothesis))) {
        kept.annotations.push_back(a);
      }
    }
    if (!kept.annotations.empty()) out.push_back(std::move(kept));
  }
  return out;
}

// Small toy model: d_e = 8, one layer, label_dim 4.
inline DaeModel TinyModel(const std::vector<ArcAnnotatedExample>& data,
                          uint64_t seed = 1) {
  ModelConfig mc;
  mc.encoder.dim = 8;
  mc.encoder.layers = 1;
  mc.encoder.heads = 2;
  mc.encoder.ffn_dim = 16;
  mc.label_dim = 4;
  mc.seed = seed;
  return DaeModel::CreateToy(data, mc);
}

}  // namespace dae::testing

#endif  // DAE_TESTS_FIXTURES_H_
