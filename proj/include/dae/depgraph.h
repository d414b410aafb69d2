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

// Dependency-parse data model. A ParsedSentence holds tokens and (possibly
// enhanced, multi-headed) dependency arcs as produced by an external parser.
// Arcs are compared across sentences through ArcKey, the lowercased
// (head form, child form, label) triple.

#ifndef DAE_DEPGRAPH_H_
#define DAE_DEPGRAPH_H_

#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace dae {

// Surface form used for the synthetic root head (head index 0).
inline constexpr std::string_view kRootForm = "ROOT";

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string pos;
  std::string lemma;  // empty when the parser did not supply one

  friend bool operator==(const Token&, const Token&) = default;
};

struct DependencyArc {
  int head = 0;  // 0 is the synthetic ROOT
  int child = 0;
  std::string label;

  friend bool operator==(const DependencyArc&, const DependencyArc&) = default;
  friend auto operator<=>(const DependencyArc&, const DependencyArc&) = default;
};

struct ParsedSentence {
  std::string text;
  std::vector<Token> tokens;
  std::vector<DependencyArc> arcs;

  int size() const { return static_cast<int>(tokens.size()); }

  // Form of token `index`; "ROOT" for 0. Throws kStructural when out of range.
  std::string_view FormAt(int index) const;

  friend bool operator==(const ParsedSentence&,
                         const ParsedSentence&) = default;
};

// Throws Error(kStructural) if token indices are not contiguous from 1, a
// form is empty, or an arc violates its index invariants.
void ValidateSentence(const ParsedSentence& sentence);

// Builds a sentence whose text is the space-joined token forms.
std::string JoinForms(const std::vector<Token>& tokens);

struct ArcKey {
  std::string head_form;
  std::string child_form;
  std::string label;

  friend bool operator==(const ArcKey&, const ArcKey&) = default;
  friend auto operator<=>(const ArcKey&, const ArcKey&) = default;
};

using ArcKeySet = std::set<ArcKey>;

struct ArcKeyOptions {
  // Match on lemmas instead of surface forms. Tokens without a lemma fall
  // back to their form.
  bool use_lemma = false;
};

// Relation before the first ':' ("nmod:in" -> "nmod").
std::string_view BaseRelation(std::string_view label);

// True for punct, det, case, aux, auxpass, dep, cop, mark.
bool IsExcludedRelation(std::string_view label);

std::vector<DependencyArc> FilterSemanticArcs(const ParsedSentence& parse);

ArcKey MakeArcKey(const DependencyArc& arc, const ParsedSentence& sentence,
                  const ArcKeyOptions& options = {});

ArcKeySet MakeArcSet(const ParsedSentence& parse,
                     const ArcKeyOptions& options = {});

// "label(head->child)" using surface forms.
std::string RenderArc(const DependencyArc& arc, const ParsedSentence& sentence);

}  // namespace dae

#endif  // DAE_DEPGRAPH_H_
