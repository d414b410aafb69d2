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

#include "dae/autolabel.h"

#include <map>
#include <tuple>

#include "dae/error.h"

namespace dae {
namespace {

bool Contains(const ArcKeySet& set, const ArcKey& key) {
  return set.find(key) != set.end();
}

}  // namespace

std::optional<ArcAnnotatedExample> LabelGoldPair(const ParaphrasePair& pair) {
  ArcAnnotatedExample ex;
  ex.premise = pair.source;
  ex.hypothesis = pair.gold;
  ex.provenance = Provenance::kGoldPair;
  for (const DependencyArc& arc : FilterSemanticArcs(pair.gold)) {
    ex.annotations.push_back(ArcAnnotation{arc, Entailment::kEntailed});
  }
  if (ex.annotations.empty()) return std::nullopt;
  return ex;
}

std::vector<ArcAnnotatedExample> LabelBeam(const BeamRecord& record,
                                           const LabelingConfig& config) {
  const int k = record.beam_size();
  if (config.bottom_m < 1 || config.bottom_m >= k) {
    throw Error(ErrorCode::kPrecondition,
                "bottom_m=" + std::to_string(config.bottom_m) +
                    " needs 1 <= bottom_m < beam size (" + std::to_string(k) +
                    ")");
  }
  const ArcKeyOptions& opts = config.key_options;
  ArcKeySet entailed = MakeArcSet(record.source, opts);
  entailed.merge(MakeArcSet(record.gold, opts));
  const ParsedSentence& top = record.candidates.front();
  const ArcKeySet top_set = MakeArcSet(top, opts);

  std::vector<ArcAnnotatedExample> out;
  for (int c = k - config.bottom_m; c < k; ++c) {
    const ParsedSentence& hyp = record.candidates[c];
    ArcAnnotatedExample ex;
    ex.premise = record.source;
    ex.hypothesis = hyp;
    ex.provenance = Provenance::kBeamBottom;
    for (const DependencyArc& arc : FilterSemanticArcs(hyp)) {
      const ArcKey key = MakeArcKey(arc, hyp, opts);
      std::optional<Entailment> label;
      if (Contains(entailed, key)) {
        label = Entailment::kEntailed;
      } else if (Contains(top_set, key)) {
        label = std::nullopt;
      } else {
        label = Entailment::kNonEntailed;
      }
      ex.annotations.push_back(ArcAnnotation{arc, label});
    }
    if (!ex.annotations.empty()) out.push_back(std::move(ex));
  }

  if (config.include_top_positive) {
    ArcAnnotatedExample ex;
    ex.premise = record.source;
    ex.hypothesis = top;
    ex.provenance = Provenance::kBeamTop;
    for (const DependencyArc& arc : FilterSemanticArcs(top)) {
      if (Contains(entailed, MakeArcKey(arc, top, opts))) {
        ex.annotations.push_back(ArcAnnotation{arc, Entailment::kEntailed});
      }
    }
    if (!ex.annotations.empty()) out.push_back(std::move(ex));
  }
  return out;
}

std::vector<SentencePairExample> DeriveSentenceDataset(
    std::span<const BeamRecord> records, int bottom) {
  std::vector<SentencePairExample> out;
  for (const BeamRecord& r : records) {
    if (r.beam_size() < bottom + 1) {
      throw Error(ErrorCode::kPrecondition,
                  "beam of size " + std::to_string(r.beam_size()) +
                      " is too small for " + std::to_string(bottom) +
                      " negatives");
    }
    out.push_back(SentencePairExample{r.source, r.gold, true});
    out.push_back(SentencePairExample{r.source, r.source, true});
    for (int c = r.beam_size() - bottom; c < r.beam_size(); ++c) {
      out.push_back(SentencePairExample{r.source, r.candidates[c], false});
    }
  }
  return out;
}

AgreementReport MeasureAgreement(std::span<const ArcAnnotatedExample> automatic,
                                 std::span<const ArcAnnotatedExample> manual) {
  using Key = std::tuple<std::string, std::string, DependencyArc>;
  struct Entry {
    std::optional<Entailment> label;
    const ParsedSentence* hypothesis;
  };
  auto index = [](std::span<const ArcAnnotatedExample> examples) {
    std::map<Key, Entry> m;
    for (const ArcAnnotatedExample& ex : examples) {
      for (const ArcAnnotation& a : ex.annotations) {
        m[Key{ex.premise.text, ex.hypothesis.text, a.arc}] =
            Entry{a.gold, &ex.hypothesis};
      }
    }
    return m;
  };
  const std::map<Key, Entry> auto_index = index(automatic);
  const std::map<Key, Entry> manual_index = index(manual);

  AgreementReport report;
  for (const auto& [key, entry] : auto_index) {
    auto it = manual_index.find(key);
    if (it == manual_index.end()) {
      ++report.only_in_auto;
      continue;
    }
    if (!entry.label.has_value() || !it->second.label.has_value()) continue;
    ++report.compared;
    if (*entry.label == *it->second.label) {
      ++report.matched;
      continue;
    }
    const auto& [premise, hypothesis, arc] = key;
    LabelDisagreement d{premise, hypothesis, arc,
                        RenderArc(arc, *entry.hypothesis)};
    if (*entry.label == Entailment::kEntailed) {
      report.false_positives.push_back(std::move(d));
    } else {
      report.false_negatives.push_back(std::move(d));
    }
  }
  for (const auto& [key, entry] : manual_index) {
    if (auto_index.find(key) == auto_index.end()) ++report.only_in_manual;
  }
  if (report.compared == 0) {
    throw Error(ErrorCode::kMetric, "no labeled arc is shared by both sets");
  }
  report.agreement =
      static_cast<double>(report.matched) / static_cast<double>(report.compared);
  return report;
}

}  // namespace dae
