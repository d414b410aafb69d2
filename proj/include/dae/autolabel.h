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

// Automatic arc-level labels from paraphrase pairs and beam outputs.
//
// Gold paraphrases are taken as fully entailed by their source. For a beam
// h_1..h_k, the arcs of each bottom hypothesis are labeled against the
// entailed set E = arcs(x) U arcs(h*):
//
//   entailed      key in E
//   unlabeled     key in arcs(h_1) \ E
//   non-entailed  otherwise
//
// All arc sets are built from semantic (filtered) arcs and compared by
// ArcKey.

#ifndef DAE_AUTOLABEL_H_
#define DAE_AUTOLABEL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dae/dataio.h"

namespace dae {

struct LabelingConfig {
  int bottom_m = 3;
  bool include_top_positive = true;
  ArcKeyOptions key_options;
};

// nullopt when h* has no semantic arcs.
std::optional<ArcAnnotatedExample> LabelGoldPair(const ParaphrasePair& pair);

// Throws Error(kPrecondition) unless 1 <= bottom_m < beam size.
std::vector<ArcAnnotatedExample> LabelBeam(const BeamRecord& record,
                                           const LabelingConfig& config = {});

// Positives (x, h*) and (x, x); negatives (x, h) for the `bottom` lowest
// candidates. Duplicates are kept.
std::vector<SentencePairExample> DeriveSentenceDataset(
    std::span<const BeamRecord> records, int bottom = 3);

struct LabelDisagreement {
  std::string premise;
  std::string hypothesis;
  DependencyArc arc;
  std::string rendered;
};

struct AgreementReport {
  double agreement = 0.0;
  int matched = 0;
  int compared = 0;
  // auto says entailed, manual says non-entailed.
  std::vector<LabelDisagreement> false_positives;
  // auto says non-entailed, manual says entailed.
  std::vector<LabelDisagreement> false_negatives;
  int only_in_auto = 0;
  int only_in_manual = 0;
};

// Arcs are matched on (premise text, hypothesis text, head, child, label).
// Arcs unlabeled on either side are left out of the denominator. Throws
// Error(kMetric) when no arc can be compared.
AgreementReport MeasureAgreement(std::span<const ArcAnnotatedExample> automatic,
                                 std::span<const ArcAnnotatedExample> manual);

}  // namespace dae

#endif  // DAE_AUTOLABEL_H_
