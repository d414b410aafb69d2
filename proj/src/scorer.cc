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

#include "dae/scorer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <tuple>

#include "dae/error.h"
#include "dae/random.h"

namespace dae {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Scores one side, mapping exceptions to "unscorable".
std::optional<double> SafeScore(const SentenceScorer& scorer,
                                const ParsedSentence& source,
                                const ParsedSentence& candidate,
                                int64_t item) {
  try {
    return scorer(source, candidate);
  } catch (const std::exception& e) {
    std::cerr << "warning: rerank item " << item << ": scorer failed: "
              << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

std::string_view PoolingName(Pooling pooling) {
  switch (pooling) {
    case Pooling::kMean:
      return "mean";
    case Pooling::kMin:
      return "min";
    case Pooling::kGeometric:
      return "geo";
  }
  return "mean";
}

Pooling ParsePooling(std::string_view name) {
  if (name == "mean") return Pooling::kMean;
  if (name == "min") return Pooling::kMin;
  if (name == "geo") return Pooling::kGeometric;
  throw Error(ErrorCode::kSchema,
              "unknown pooling '" + std::string(name) + "'");
}

std::optional<double> PoolScores(std::span<const double> probabilities,
                                 Pooling pooling) {
  if (probabilities.empty()) return std::nullopt;
  const double n = static_cast<double>(probabilities.size());
  switch (pooling) {
    case Pooling::kMean: {
      double sum = 0.0;
      for (double p : probabilities) sum += p;
      return sum / n;
    }
    case Pooling::kMin:
      return *std::min_element(probabilities.begin(), probabilities.end());
    case Pooling::kGeometric: {
      double log_sum = 0.0;
      for (double p : probabilities) {
        if (p <= 0.0) return 0.0;
        log_sum += std::log(p);
      }
      return std::exp(log_sum / n);
    }
  }
  return std::nullopt;
}

std::optional<RankedCandidate> SentenceScore(const ArcEntailmentModel& model,
                                             const ParsedSentence& premise,
                                             const ParsedSentence& hypothesis,
                                             Pooling pooling) {
  const std::vector<DependencyArc> arcs = FilterSemanticArcs(hypothesis);
  if (arcs.empty()) return std::nullopt;
  RankedCandidate out;
  out.hypothesis = hypothesis;
  std::vector<double> probs;
  if (const auto* dae = dynamic_cast<const DaeModel*>(&model)) {
    for (const ArcPrediction& p :
         dae->PredictArcsDetailed(premise, hypothesis, arcs)) {
      probs.push_back(p.p_entailed);
      out.truncated = out.truncated || p.truncated;
    }
  } else {
    probs = model.PredictArcs(premise, hypothesis, arcs);
  }
  if (probs.size() != arcs.size()) {
    throw Error(ErrorCode::kModel, "model returned " +
                                       std::to_string(probs.size()) +
                                       " scores for " +
                                       std::to_string(arcs.size()) + " arcs");
  }
  for (size_t i = 0; i < arcs.size(); ++i) {
    out.arc_scores.emplace_back(arcs[i], probs[i]);
  }
  out.sentence_score = *PoolScores(probs, pooling);
  return out;
}

ordered_json RerankItemToJson(const RerankItem& item) {
  ordered_json j;
  j["source"] = SentenceToJson(item.source);
  j["correct"] = SentenceToJson(item.correct);
  j["incorrect"] = SentenceToJson(item.incorrect);
  return j;
}

RerankItem RerankItemFromJson(const json& j) {
  for (const char* key : {"source", "correct", "incorrect"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw Error(ErrorCode::kSchema,
                  std::string("missing field '") + key + "'");
    }
  }
  RerankItem item;
  item.source = SentenceFromJson(j.at("source"));
  item.correct = SentenceFromJson(j.at("correct"));
  item.incorrect = SentenceFromJson(j.at("incorrect"));
  if (item.correct.tokens.empty() || item.incorrect.tokens.empty()) {
    throw Error(ErrorCode::kSchema, "rerank candidates must be non-empty");
  }
  return item;
}

std::vector<RerankItem> ReadRerankItems(const std::string& path) {
  std::vector<RerankItem> out;
  ForEachJsonLine(path, [&](const json& j, int) {
    out.push_back(RerankItemFromJson(j));
  });
  return out;
}

void WriteRerankItems(std::span<const RerankItem> items,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  for (const RerankItem& item : items) {
    out << RerankItemToJson(item).dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

RerankResult Rerank(const SentenceScorer& scorer,
                    std::span<const RerankItem> items, uint64_t seed) {
  if (items.empty()) {
    throw Error(ErrorCode::kPrecondition, "no rerank items");
  }
  Rng coin(seed);
  RerankResult r;
  r.items = static_cast<int64_t>(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    const RerankItem& item = items[i];
    const int64_t id = static_cast<int64_t>(i) + 1;
    const std::optional<double> good =
        SafeScore(scorer, item.source, item.correct, id);
    const std::optional<double> bad =
        SafeScore(scorer, item.source, item.incorrect, id);
    if (good.has_value() && bad.has_value() && *good != *bad) {
      if (*good > *bad) {
        ++r.wins;
      } else {
        ++r.losses;
      }
      continue;
    }
    if (good.has_value() && bad.has_value()) {
      ++r.ties;
    } else {
      ++r.failures;
    }
    if ((coin() & 1U) == 1U) ++r.coin_wins;
  }
  r.accuracy = static_cast<double>(r.wins + r.coin_wins) /
               static_cast<double>(r.items);
  return r;
}

double RerankAccuracy(const SentenceScorer& scorer,
                      std::span<const RerankItem> items, uint64_t seed) {
  return Rerank(scorer, items, seed).accuracy;
}

std::optional<double> RuleBasedScore(const ParsedSentence& premise,
                                     const ParsedSentence& hypothesis,
                                     const ArcKeyOptions& options) {
  const std::vector<DependencyArc> arcs = FilterSemanticArcs(hypothesis);
  if (arcs.empty()) return std::nullopt;
  const ArcKeySet premise_arcs = MakeArcSet(premise, options);
  int shared = 0;
  for (const DependencyArc& arc : arcs) {
    if (premise_arcs.contains(MakeArcKey(arc, hypothesis, options))) ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(arcs.size());
}

SentenceScorer ModelScorer(const ArcEntailmentModel& model, Pooling pooling) {
  return [&model, pooling](const ParsedSentence& source,
                           const ParsedSentence& candidate)
             -> std::optional<double> {
    auto scored = SentenceScore(model, source, candidate, pooling);
    if (!scored.has_value()) return std::nullopt;
    return scored->sentence_score;
  };
}

SentenceScorer RuleBasedScorer() {
  return [](const ParsedSentence& source, const ParsedSentence& candidate) {
    return RuleBasedScore(source, candidate);
  };
}

Entailment LexicalMatchPredict(const ParsedSentence& premise,
                               const DependencyArc& arc,
                               const ParsedSentence& hypothesis,
                               const ArcKeyOptions& options) {
  return MakeArcSet(premise, options)
                 .contains(MakeArcKey(arc, hypothesis, options))
             ? Entailment::kEntailed
             : Entailment::kNonEntailed;
}

std::vector<double> LexicalMatchModel::PredictArcs(
    const ParsedSentence& premise, const ParsedSentence& hypothesis,
    std::span<const DependencyArc> arcs) const {
  const ArcKeySet premise_arcs = MakeArcSet(premise, options_);
  std::vector<double> out;
  out.reserve(arcs.size());
  for (const DependencyArc& arc : arcs) {
    out.push_back(
        premise_arcs.contains(MakeArcKey(arc, hypothesis, options_)) ? 1.0
                                                                     : 0.0);
  }
  return out;
}

std::vector<double> MajorityModel::PredictArcs(
    const ParsedSentence&, const ParsedSentence&,
    std::span<const DependencyArc> arcs) const {
  return std::vector<double>(arcs.size(), 1.0);
}

LocalizationReport Localize(const ArcEntailmentModel& model,
                            const ParsedSentence& premise,
                            const ParsedSentence& hypothesis,
                            Pooling pooling) {
  LocalizationReport report;
  report.premise = premise.text;
  report.hypothesis = hypothesis.text;
  const std::optional<RankedCandidate> scored =
      SentenceScore(model, premise, hypothesis, pooling);
  if (!scored.has_value()) return report;
  report.sentence_score = scored->sentence_score;
  report.truncated = scored->truncated;
  for (const auto& [arc, p] : scored->arc_scores) {
    report.arcs.push_back(LocalizedArc{arc, RenderArc(arc, hypothesis), p});
  }
  std::sort(report.arcs.begin(), report.arcs.end(),
            [](const LocalizedArc& a, const LocalizedArc& b) {
              return std::tie(a.probability, a.arc.child, a.arc.head,
                              a.arc.label) < std::tie(b.probability,
                                                      b.arc.child, b.arc.head,
                                                      b.arc.label);
            });
  return report;
}

void WriteReportText(const LocalizationReport& report, std::ostream& out) {
  out << "premise: " << report.premise << '\n';
  out << "hypothesis: " << report.hypothesis << '\n';
  if (!report.sentence_score.has_value()) {
    out << "sentence_score: unscorable (no semantic arcs)\n";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *report.sentence_score);
  out << "sentence_score: " << buf << '\n';
  if (report.truncated) out << "note: premise truncated\n";
  for (const LocalizedArc& a : report.arcs) {
    std::snprintf(buf, sizeof(buf), "%.4f", a.probability);
    out << "  " << buf << "  " << a.rendered << '\n';
  }
}

ordered_json ReportToJson(const LocalizationReport& report) {
  ordered_json j;
  j["premise"] = report.premise;
  j["hypothesis"] = report.hypothesis;
  j["sentence_score"] = report.sentence_score.has_value()
                            ? ordered_json(*report.sentence_score)
                            : ordered_json(nullptr);
  j["truncated"] = report.truncated;
  ordered_json arcs = ordered_json::array();
  for (const LocalizedArc& a : report.arcs) {
    ordered_json aj;
    aj["head"] = a.arc.head;
    aj["child"] = a.arc.child;
    aj["label"] = a.arc.label;
    aj["arc"] = a.rendered;
    aj["p_entailed"] = a.probability;
    arcs.push_back(std::move(aj));
  }
  j["arcs"] = std::move(arcs);
  return j;
}

}  // namespace dae
