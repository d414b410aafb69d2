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

// Seeded generator of small parsed English sentences with hand-built
// enhanced dependency parses, in-place synonym paraphrases, beam records and
// a matching word-vector table. Used for demos, tests and smoke runs.

#ifndef DAE_SYNTHETIC_H_
#define DAE_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dae/augment.h"
#include "dae/dataio.h"
#include "dae/random.h"

namespace dae {

class SyntheticCorpus {
 public:
  explicit SyntheticCorpus(uint64_t seed);

  // One templated sentence (5 to 12 tokens, final punctuation included).
  ParsedSentence Sentence();

  // Source plus a copy with 1 or 2 content words replaced in place by a
  // synonym.
  ParaphrasePair SynonymParaphrase();
  ParsedSentence SynonymVariant(const ParsedSentence& x, int replacements);

  // x with one content word replaced by a different non-synonym word of the
  // same part of speech.
  ParsedSentence Substitution(const ParsedSentence& x);

  // Beam of size k >= 4: h_1 is a light paraphrase or substitution; the
  // bottom three are a noun swap, a substitution of x and a substitution of
  // h_1.
  BeamRecord Beam(int k);

  // Vectors for every lexicon word; synonyms share a base direction.
  static WordVectors Vectors(int dim, uint64_t seed);
  static void WriteVectors(const std::string& path, int dim, uint64_t seed);

  static bool AreSynonyms(std::string_view a, std::string_view b);

 private:
  const std::string& Pick(const std::vector<std::string>& words);

  Rng rng_;
};

}  // namespace dae

#endif  // DAE_SYNTHETIC_H_
