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

// Corpus records and their JSON-lines persistence.
//
// A dataset file holds one ArcAnnotatedExample per line:
//
//   {"premise": S, "hypothesis": S,
//    "annotations": [{"head", "child", "label", "gold": 1|0|null,
//                     "head_form", "child_form"}],
//    "provenance": "gold_pair"}
//
// where S = {"text", "tokens": [{"i", "form", "pos"[, "lemma"]}],
//            "arcs": [{"head", "child", "label"}]}.
//
// Paraphrase files carry {"source": S, "gold": S}; beam files add
// "candidates": [S, ...] ordered best first.

#ifndef DAE_DATAIO_H_
#define DAE_DATAIO_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dae/depgraph.h"
#include "json.hpp"

namespace dae {

enum class Entailment : int { kNonEntailed = 0, kEntailed = 1 };

enum class Provenance {
  kGoldPair,
  kBeamBottom,
  kBeamTop,
  kWordSwap,
  kSynonym,
  kHallucinationSpan,
  kHallucinationOverlap,
};

std::string_view ProvenanceName(Provenance p);
// Throws Error(kSchema) on an unknown tag.
Provenance ParseProvenance(std::string_view name);

struct ArcAnnotation {
  DependencyArc arc;
  std::optional<Entailment> gold;  // nullopt = unlabeled

  friend bool operator==(const ArcAnnotation&, const ArcAnnotation&) = default;
};

struct ArcAnnotatedExample {
  ParsedSentence premise;
  ParsedSentence hypothesis;
  std::vector<ArcAnnotation> annotations;
  Provenance provenance = Provenance::kGoldPair;

  int NumLabeled() const;

  friend bool operator==(const ArcAnnotatedExample&,
                         const ArcAnnotatedExample&) = default;
};

struct ParaphrasePair {
  ParsedSentence source;
  ParsedSentence gold;
};

struct BeamRecord {
  ParsedSentence source;
  ParsedSentence gold;
  std::vector<ParsedSentence> candidates;  // best first

  int beam_size() const { return static_cast<int>(candidates.size()); }
};

struct SentencePairExample {
  ParsedSentence premise;
  ParsedSentence hypothesis;
  bool positive = false;

  friend bool operator==(const SentencePairExample&,
                         const SentencePairExample&) = default;
};

// JSON conversion. The *FromJson functions throw Error(kSchema).
nlohmann::ordered_json SentenceToJson(const ParsedSentence& sentence);
ParsedSentence SentenceFromJson(const nlohmann::json& j);
nlohmann::ordered_json ExampleToJson(const ArcAnnotatedExample& example);
ArcAnnotatedExample ExampleFromJson(const nlohmann::json& j);
nlohmann::ordered_json SentencePairToJson(const SentencePairExample& example);
nlohmann::ordered_json BeamRecordToJson(const BeamRecord& record);
BeamRecord BeamRecordFromJson(const nlohmann::json& j);
nlohmann::ordered_json ParaphrasePairToJson(const ParaphrasePair& pair);
ParaphrasePair ParaphrasePairFromJson(const nlohmann::json& j);

// Reads a JSON-lines file, calling `fn(json, record_number)` per non-blank
// line. Record numbers are 1-based. Errors from `fn` are rethrown with the
// record number attached.
void ForEachJsonLine(const std::string& path,
                     const std::function<void(const nlohmann::json&, int)>& fn);

void WriteDataset(std::span<const ArcAnnotatedExample> examples,
                  const std::string& path);
std::vector<ArcAnnotatedExample> ReadDataset(const std::string& path);

void WriteSentencePairs(std::span<const SentencePairExample> examples,
                        const std::string& path);
std::vector<ParaphrasePair> ReadParaphrasePairs(const std::string& path);
void WriteParaphrasePairs(std::span<const ParaphrasePair> pairs,
                          const std::string& path);
std::vector<BeamRecord> ReadBeamRecords(const std::string& path);
void WriteBeamRecords(std::span<const BeamRecord> records,
                      const std::string& path);

struct DatasetStats {
  int64_t examples = 0;
  int64_t entailed = 0;
  int64_t non_entailed = 0;
  int64_t unlabeled = 0;

  int64_t labeled() const { return entailed + non_entailed; }
  // entailed / (entailed + non_entailed); 0 when nothing is labeled.
  double EntailedRatio() const;
  // entailed / all annotated arcs, unlabeled included.
  double EntailedRatioAllArcs() const;
};

DatasetStats ComputeStats(std::span<const ArcAnnotatedExample> examples);

}  // namespace dae

#endif  // DAE_DATAIO_H_
