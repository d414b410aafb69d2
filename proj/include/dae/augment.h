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

// Synthetic training data: word swaps, synonym-preserving paraphrases, and
// two kinds of hallucination.

#ifndef DAE_AUGMENT_H_
#define DAE_AUGMENT_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dae/dataio.h"

namespace dae {

struct SwapConfig {
  int num_swaps = 1;
  uint64_t rng_seed = 0;
};

// Swaps `num_swaps` disjoint pairs of tokens sharing a coarse POS tag and
// differing in lowercased form. The swapped sentence keeps the original arc
// structure (arcs are index-based), so only arcs touching a swapped token can
// change key. Arcs of the swapped hypothesis whose key occurs in the original
// are entailed; all others are non-entailed.
//
// Throws Error(kNoOp) if no eligible pair exists and Error(kPrecondition) if
// fewer than num_swaps disjoint pairs exist.
ArcAnnotatedExample WordSwap(const ParsedSentence& x, const SwapConfig& config);

// Applies explicit (i, j) token swaps (1-based) and labels as above.
ArcAnnotatedExample WordSwapAt(const ParsedSentence& x,
                               std::span<const std::pair<int, int>> swaps);

using WordSimilarity =
    std::function<double(std::string_view a, std::string_view b)>;

// word -> vector, loaded from "word v1 v2 ..." text lines.
class WordVectors {
 public:
  static WordVectors Load(const std::string& path);
  void Add(std::string word, std::vector<double> vector);
  const std::vector<double>* Find(std::string_view word) const;
  size_t size() const { return vectors_.size(); }
  int dim() const { return dim_; }

 private:
  std::unordered_map<std::string, std::vector<double>> vectors_;
  int dim_ = 0;
};

// 1.0 on case-insensitive exact match; otherwise the cosine of the two word
// vectors, or 0 when either is missing. `vectors` must outlive the result.
WordSimilarity MakeSimilarity(const WordVectors* vectors);

struct AlignmentConfig {
  double similarity_threshold = 0.5;
  // Mean |i - j| / max(len(x), len(h)) over aligned word pairs.
  double max_mean_displacement = 0.1;
};

struct Alignment {
  std::vector<std::pair<int, int>> pairs;  // 0-based (source, gold) positions
  double coverage = 0.0;                   // aligned / len(gold)
  double mean_displacement = 0.0;
};

// Greedy alignment: candidate pairs at or above the threshold are taken in
// order of decreasing similarity, ties broken by source then gold position.
Alignment AlignWords(const ParsedSentence& source, const ParsedSentence& gold,
                     const WordSimilarity& similarity, double threshold);

// Keeps pairs with coverage >= 0.5 and mean displacement within bounds; all
// semantic arcs of the gold side are labeled entailed.
std::vector<ArcAnnotatedExample> SelectSynonymPairs(
    std::span<const ParaphrasePair> pairs, const AlignmentConfig& config,
    const WordSimilarity& similarity);

// Removes tokens [start, start + length) (0-based), drops arcs incident to
// them, and renumbers the rest.
ParsedSentence RemoveSpan(const ParsedSentence& x, int start, int length);

// Premise is x with the span removed, hypothesis is x. Arcs whose key is lost
// by the removal are non-entailed; every other arc stays unlabeled.
ArcAnnotatedExample HallucinateSpanAt(const ParsedSentence& x, int start,
                                      int length);

// Samples a span length in [1, n - 2] and a start, retrying up to 10 times
// until the premise is non-empty and at least one arc is non-entailed.
// Throws Error(kPrecondition) for sentences under 4 tokens and Error(kNoOp)
// when every attempt fails.
ArcAnnotatedExample HallucinateSpan(const ParsedSentence& x, uint64_t rng_seed);

// |bag(x) ∩ bag(other)| / |bag(other)| over lowercased forms.
double UnigramOverlap(const ParsedSentence& x, const ParsedSentence& other);

// Pairs each sentence with its highest-overlap partner (lowest index on
// ties) and labels every semantic arc of the partner non-entailed.
// Sentences whose best overlap is zero are skipped.
std::vector<ArcAnnotatedExample> HallucinateOverlap(
    std::span<const ParsedSentence> corpus);

}  // namespace dae

#endif  // DAE_AUGMENT_H_
