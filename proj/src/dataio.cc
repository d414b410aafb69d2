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

#include <algorithm>
#include <array>
#include <fstream>
#include <utility>

#include "dae/error.h"

namespace dae {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::pair<Provenance, std::string_view>, 7>
    kProvenanceNames = {{
        {Provenance::kGoldPair, "gold_pair"},
        {Provenance::kBeamBottom, "beam_bottom"},
        {Provenance::kBeamTop, "beam_top"},
        {Provenance::kWordSwap, "word_swap"},
        {Provenance::kSynonym, "synonym"},
        {Provenance::kHallucinationSpan, "hallucination_span"},
        {Provenance::kHallucinationOverlap, "hallucination_overlap"},
    }};

[[noreturn]] void SchemaError(const std::string& what) {
  throw Error(ErrorCode::kSchema, what);
}

const json& Require(const json& j, const char* key) {
  if (!j.is_object()) SchemaError("expected an object holding '" +
                                  std::string(key) + "'");
  auto it = j.find(key);
  if (it == j.end()) SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

int RequireInt(const json& j, const char* key) {
  const json& v = Require(j, key);
  if (!v.is_number_integer()) {
    SchemaError(std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

std::string RequireString(const json& j, const char* key) {
  const json& v = Require(j, key);
  if (!v.is_string()) {
    SchemaError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

const json& RequireArray(const json& j, const char* key) {
  const json& v = Require(j, key);
  if (!v.is_array()) {
    SchemaError(std::string("field '") + key + "' must be an array");
  }
  return v;
}

ordered_json ArcToJson(const DependencyArc& arc) {
  ordered_json j;
  j["head"] = arc.head;
  j["child"] = arc.child;
  j["label"] = arc.label;
  return j;
}

DependencyArc ArcFromJson(const json& j) {
  return DependencyArc{RequireInt(j, "head"), RequireInt(j, "child"),
                       RequireString(j, "label")};
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  return out;
}

template <typename T, typename Fn>
void WriteLines(std::span<const T> items, const std::string& path, Fn to_json) {
  std::ofstream out = OpenForWrite(path);
  for (const T& item : items) out << to_json(item).dump() << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace

std::string_view ProvenanceName(Provenance p) {
  for (const auto& [value, name] : kProvenanceNames) {
    if (value == p) return name;
  }
  return "unknown";
}

Provenance ParseProvenance(std::string_view name) {
  for (const auto& [value, tag] : kProvenanceNames) {
    if (tag == name) return value;
  }
  SchemaError("unknown provenance tag '" + std::string(name) + "'");
}

int ArcAnnotatedExample::NumLabeled() const {
  return static_cast<int>(std::count_if(
      annotations.begin(), annotations.end(),
      [](const ArcAnnotation& a) { return a.gold.has_value(); }));
}

ordered_json SentenceToJson(const ParsedSentence& sentence) {
  ordered_json j;
  j["text"] = sentence.text;
  ordered_json tokens = ordered_json::array();
  for (const Token& t : sentence.tokens) {
    ordered_json tj;
    tj["i"] = t.index;
    tj["form"] = t.form;
    tj["pos"] = t.pos;
    if (!t.lemma.empty()) tj["lemma"] = t.lemma;
    tokens.push_back(std::move(tj));
  }
  j["tokens"] = std::move(tokens);
  ordered_json arcs = ordered_json::array();
  for (const DependencyArc& arc : sentence.arcs) arcs.push_back(ArcToJson(arc));
  j["arcs"] = std::move(arcs);
  return j;
}

ParsedSentence SentenceFromJson(const json& j) {
  ParsedSentence s;
  s.text = RequireString(j, "text");
  for (const json& tj : RequireArray(j, "tokens")) {
    Token t;
    t.index = RequireInt(tj, "i");
    t.form = RequireString(tj, "form");
    t.pos = RequireString(tj, "pos");
    if (auto it = tj.find("lemma"); it != tj.end()) {
      if (!it->is_string()) SchemaError("field 'lemma' must be a string");
      t.lemma = it->get<std::string>();
    }
    s.tokens.push_back(std::move(t));
  }
  for (const json& aj : RequireArray(j, "arcs")) {
    s.arcs.push_back(ArcFromJson(aj));
  }
  try {
    ValidateSentence(s);
  } catch (const Error& e) {
    SchemaError(e.what());
  }
  return s;
}

ordered_json ExampleToJson(const ArcAnnotatedExample& example) {
  ordered_json j;
  j["premise"] = SentenceToJson(example.premise);
  j["hypothesis"] = SentenceToJson(example.hypothesis);
  ordered_json annotations = ordered_json::array();
  for (const ArcAnnotation& a : example.annotations) {
    ordered_json aj = ArcToJson(a.arc);
    if (a.gold.has_value()) {
      aj["gold"] = static_cast<int>(*a.gold);
    } else {
      aj["gold"] = nullptr;
    }
    aj["head_form"] = std::string(example.hypothesis.FormAt(a.arc.head));
    aj["child_form"] = std::string(example.hypothesis.FormAt(a.arc.child));
    annotations.push_back(std::move(aj));
  }
  j["annotations"] = std::move(annotations);
  j["provenance"] = std::string(ProvenanceName(example.provenance));
  return j;
}

ArcAnnotatedExample ExampleFromJson(const json& j) {
  ArcAnnotatedExample ex;
  ex.premise = SentenceFromJson(Require(j, "premise"));
  ex.hypothesis = SentenceFromJson(Require(j, "hypothesis"));
  for (const json& aj : RequireArray(j, "annotations")) {
    ArcAnnotation a;
    a.arc = ArcFromJson(aj);
    const json& gold = Require(aj, "gold");
    if (gold.is_null()) {
      a.gold = std::nullopt;
    } else if (gold.is_number_integer() && gold.get<int>() == 1) {
      a.gold = Entailment::kEntailed;
    } else if (gold.is_number_integer() && gold.get<int>() == 0) {
      a.gold = Entailment::kNonEntailed;
    } else {
      SchemaError("label must be 1, 0 or null; got " + gold.dump());
    }
    if (IsExcludedRelation(a.arc.label) ||
        std::find(ex.hypothesis.arcs.begin(), ex.hypothesis.arcs.end(),
                  a.arc) == ex.hypothesis.arcs.end()) {
      SchemaError("annotated arc " + a.arc.label + "(" +
                  std::to_string(a.arc.head) + "->" +
                  std::to_string(a.arc.child) +
                  ") is not a semantic arc of the hypothesis");
    }
    ex.annotations.push_back(std::move(a));
  }
  const json& provenance = Require(j, "provenance");
  if (!provenance.is_string()) SchemaError("provenance must be a string");
  ex.provenance = ParseProvenance(provenance.get<std::string>());
  return ex;
}

ordered_json SentencePairToJson(const SentencePairExample& example) {
  ordered_json j;
  j["premise"] = SentenceToJson(example.premise);
  j["hypothesis"] = SentenceToJson(example.hypothesis);
  j["label"] = example.positive ? "positive" : "negative";
  return j;
}

ordered_json ParaphrasePairToJson(const ParaphrasePair& pair) {
  ordered_json j;
  j["source"] = SentenceToJson(pair.source);
  j["gold"] = SentenceToJson(pair.gold);
  return j;
}

ParaphrasePair ParaphrasePairFromJson(const json& j) {
  return ParaphrasePair{SentenceFromJson(Require(j, "source")),
                        SentenceFromJson(Require(j, "gold"))};
}

ordered_json BeamRecordToJson(const BeamRecord& record) {
  ordered_json j;
  j["source"] = SentenceToJson(record.source);
  j["gold"] = SentenceToJson(record.gold);
  ordered_json candidates = ordered_json::array();
  for (const ParsedSentence& c : record.candidates) {
    candidates.push_back(SentenceToJson(c));
  }
  j["candidates"] = std::move(candidates);
  return j;
}

BeamRecord BeamRecordFromJson(const json& j) {
  BeamRecord record;
  record.source = SentenceFromJson(Require(j, "source"));
  record.gold = SentenceFromJson(Require(j, "gold"));
  for (const json& cj : RequireArray(j, "candidates")) {
    record.candidates.push_back(SentenceFromJson(cj));
  }
  return record;
}

void ForEachJsonLine(const std::string& path,
                     const std::function<void(const json&, int)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  int record = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++record;
    try {
      fn(json::parse(line), record);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchema, path + ": record " +
                                          std::to_string(record) + ": " +
                                          e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path + ": record " + std::to_string(record) +
                                ": " + e.what());
    }
  }
}

void WriteDataset(std::span<const ArcAnnotatedExample> examples,
                  const std::string& path) {
  WriteLines(examples, path, ExampleToJson);
}

std::vector<ArcAnnotatedExample> ReadDataset(const std::string& path) {
  std::vector<ArcAnnotatedExample> out;
  ForEachJsonLine(path, [&](const json& j, int) {
    out.push_back(ExampleFromJson(j));
  });
  return out;
}

void WriteSentencePairs(std::span<const SentencePairExample> examples,
                        const std::string& path) {
  WriteLines(examples, path, SentencePairToJson);
}

std::vector<ParaphrasePair> ReadParaphrasePairs(const std::string& path) {
  std::vector<ParaphrasePair> out;
  ForEachJsonLine(path, [&](const json& j, int) {
    out.push_back(ParaphrasePairFromJson(j));
  });
  return out;
}

void WriteParaphrasePairs(std::span<const ParaphrasePair> pairs,
                          const std::string& path) {
  WriteLines(pairs, path, ParaphrasePairToJson);
}

std::vector<BeamRecord> ReadBeamRecords(const std::string& path) {
  std::vector<BeamRecord> out;
  ForEachJsonLine(path, [&](const json& j, int) {
    out.push_back(BeamRecordFromJson(j));
  });
  return out;
}

void WriteBeamRecords(std::span<const BeamRecord> records,
                      const std::string& path) {
  WriteLines(records, path, BeamRecordToJson);
}

double DatasetStats::EntailedRatio() const {
  return labeled() == 0 ? 0.0
                        : static_cast<double>(entailed) /
                              static_cast<double>(labeled());
}

double DatasetStats::EntailedRatioAllArcs() const {
  const int64_t total = labeled() + unlabeled;
  return total == 0 ? 0.0
                    : static_cast<double>(entailed) /
                          static_cast<double>(total);
}

DatasetStats ComputeStats(std::span<const ArcAnnotatedExample> examples) {
  DatasetStats stats;
  for (const ArcAnnotatedExample& ex : examples) {
    ++stats.examples;
    for (const ArcAnnotation& a : ex.annotations) {
      if (!a.gold.has_value()) {
        ++stats.unlabeled;
      } else if (*a.gold == Entailment::kEntailed) {
        ++stats.entailed;
      } else {
        ++stats.non_entailed;
      }
    }
  }
  return stats;
}

}  // namespace dae
