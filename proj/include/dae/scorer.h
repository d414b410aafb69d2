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

// Sentence scoring, pairwise reranking, baselines and per-arc reports.

#ifndef DAE_SCORER_H_
#define DAE_SCORER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dae/dataio.h"
#include "dae/model.h"

namespace dae {

enum class Pooling { kMean, kMin, kGeometric };

std::string_view PoolingName(Pooling pooling);
// Accepts "mean", "min" and "geo". Throws Error(kSchema) otherwise.
Pooling ParsePooling(std::string_view name);

// Pools arc probabilities. Returns nullopt for an empty input.
std::optional<double> PoolScores(std::span<const double> probabilities,
                                 Pooling pooling = Pooling::kMean);

struct RankedCandidate {
  ParsedSentence hypothesis;
  double sentence_score = 0.0;
  std::vector<std::pair<DependencyArc, double>> arc_scores;
  bool truncated = false;
};

// Scores every semantic arc of `hypothesis`. Returns nullopt when the
// hypothesis has no semantic arc.
std::optional<RankedCandidate> SentenceScore(
    const ArcEntailmentModel& model, const ParsedSentence& premise,
    const ParsedSentence& hypothesis, Pooling pooling = Pooling::kMean);

struct RerankItem {
  ParsedSentence source;
  ParsedSentence correct;
  ParsedSentence incorrect;
};

nlohmann::ordered_json RerankItemToJson(const RerankItem& item);
RerankItem RerankItemFromJson(const nlohmann::json& j);
std::vector<RerankItem> ReadRerankItems(const std::string& path);
void WriteRerankItems(std::span<const RerankItem> items,
                      const std::string& path);

// nullopt (or a thrown exception) marks the candidate as unscorable.
using SentenceScorer = std::function<std::optional<double>(
    const ParsedSentence& source, const ParsedSentence& candidate)>;

struct RerankResult {
  double accuracy = 0.0;
  int64_t items = 0;
  int64_t wins = 0;
  int64_t losses = 0;
  int64_t ties = 0;      // decided by the coin
  int64_t failures = 0;  // at least one side unscorable; also coin-decided
  int64_t coin_wins = 0;
};

// Counts items whose correct candidate scores strictly higher. Exact ties and
// unscorable items are decided by a fair coin drawn from an RNG seeded with
// `seed`, one draw per such item in item order. Throws Error(kPrecondition)
// for an empty item list.
RerankResult Rerank(const SentenceScorer& scorer,
                    std::span<const RerankItem> items, uint64_t seed);
double RerankAccuracy(const SentenceScorer& scorer,
                      std::span<const RerankItem> items, uint64_t seed);

// Fraction of the hypothesis's semantic arcs whose key occurs in the premise.
std::optional<double> RuleBasedScore(const ParsedSentence& premise,
                                     const ParsedSentence& hypothesis,
                                     const ArcKeyOptions& options = {});

SentenceScorer ModelScorer(const ArcEntailmentModel& model,
                           Pooling pooling = Pooling::kMean);
SentenceScorer RuleBasedScorer();

// Entailed iff the arc's key occurs in the premise's arc set.
Entailment LexicalMatchPredict(const ParsedSentence& premise,
                               const DependencyArc& arc,
                               const ParsedSentence& hypothesis,
                               const ArcKeyOptions& options = {});

// Hard 0/1 probabilities from lexical matching.
class LexicalMatchModel : public ArcEntailmentModel {
 public:
  explicit LexicalMatchModel(ArcKeyOptions options = {}) : options_(options) {}
  std::vector<double> PredictArcs(
      const ParsedSentence& premise, const ParsedSentence& hypothesis,
      std::span<const DependencyArc> arcs) const override;

 private:
  ArcKeyOptions options_;
};

// Predicts entailed for every arc.
class MajorityModel : public ArcEntailmentModel {
 public:
  std::vector<double> PredictArcs(
      const ParsedSentence& premise, const ParsedSentence& hypothesis,
      std::span<const DependencyArc> arcs) const override;
};

struct LocalizedArc {
  DependencyArc arc;
  std::string rendered;  // label(head→child)
  double probability = 0.0;
};

struct LocalizationReport {
  std::string premise;
  std::string hypothesis;
  // Ascending probability; ties by child index, head index, then label.
  std::vector<LocalizedArc> arcs;
  std::optional<double> sentence_score;
  bool truncated = false;
};

LocalizationReport Localize(const ArcEntailmentModel& model,
                            const ParsedSentence& premise,
                            const ParsedSentence& hypothesis,
                            Pooling pooling = Pooling::kMean);
void WriteReportText(const LocalizationReport& report, std::ostream& out);
nlohmann::ordered_json ReportToJson(const LocalizationReport& report);

}  // namespace dae

#endif  // DAE_SCORER_H_
