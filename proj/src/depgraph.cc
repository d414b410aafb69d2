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

#include "dae/depgraph.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "dae/error.h"

namespace dae {
namespace {

constexpr std::array<std::string_view, 8> kExcludedRelations = {
    "punct", "det", "case", "aux", "auxpass", "dep", "cop", "mark"};

std::string Lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view ErrorCategory(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return "IO";
    case ErrorCode::kModel:
      return "MODEL";
    case ErrorCode::kMetric:
      return "METRIC";
    default:
      return "SCHEMA";
  }
}

std::string_view ParsedSentence::FormAt(int index) const {
  if (index == 0) return kRootForm;
  if (index < 0 || index > size()) {
    throw Error(ErrorCode::kStructural,
                "token index " + std::to_string(index) +
                    " out of range for sentence of " + std::to_string(size()) +
                    " tokens");
  }
  return tokens[index - 1].form;
}

void ValidateSentence(const ParsedSentence& sentence) {
  for (int i = 0; i < sentence.size(); ++i) {
    const Token& t = sentence.tokens[i];
    if (t.index != i + 1) {
      throw Error(ErrorCode::kStructural,
                  "token indices must be contiguous from 1; found " +
                      std::to_string(t.index) + " at position " +
                      std::to_string(i + 1));
    }
    if (t.form.empty()) {
      throw Error(ErrorCode::kStructural,
                  "empty form at token " + std::to_string(t.index));
    }
  }
  for (const DependencyArc& arc : sentence.arcs) {
    if (arc.child < 1 || arc.child > sentence.size() || arc.head < 0 ||
        arc.head > sentence.size() || arc.head == arc.child) {
      throw Error(ErrorCode::kStructural,
                  "invalid arc " + arc.label + "(" + std::to_string(arc.head) +
                      "->" + std::to_string(arc.child) + ")");
    }
  }
}

std::string JoinForms(const std::vector<Token>& tokens) {
  std::string text;
  for (const Token& t : tokens) {
    if (!text.empty()) text += ' ';
    text += t.form;
  }
  return text;
}

std::string_view BaseRelation(std::string_view label) {
  return label.substr(0, label.find(':'));
}

bool IsExcludedRelation(std::string_view label) {
  const std::string_view base = BaseRelation(label);
  return std::find(kExcludedRelations.begin(), kExcludedRelations.end(),
                   base) != kExcludedRelations.end();
}

std::vector<DependencyArc> FilterSemanticArcs(const ParsedSentence& parse) {
  std::vector<DependencyArc> kept;
  kept.reserve(parse.arcs.size());
  for (const DependencyArc& arc : parse.arcs) {
    if (!IsExcludedRelation(arc.label)) kept.push_back(arc);
  }
  return kept;
}

ArcKey MakeArcKey(const DependencyArc& arc, const ParsedSentence& sentence,
                  const ArcKeyOptions& options) {
  auto word = [&](int index) -> std::string {
    if (index == 0) return std::string(kRootForm);
    std::string_view form = sentence.FormAt(index);
    if (options.use_lemma) {
      const std::string& lemma = sentence.tokens[index - 1].lemma;
      if (!lemma.empty()) form = lemma;
    }
    return Lowercase(form);
  };
  return ArcKey{word(arc.head), word(arc.child), arc.label};
}

ArcKeySet MakeArcSet(const ParsedSentence& parse,
                     const ArcKeyOptions& options) {
  ArcKeySet keys;
  for (const DependencyArc& arc : FilterSemanticArcs(parse)) {
    keys.insert(MakeArcKey(arc, parse, options));
  }
  return keys;
}

std::string RenderArc(const DependencyArc& arc,
                      const ParsedSentence& sentence) {
  std::string out = arc.label;
  out += '(';
  out += sentence.FormAt(arc.head);
  out += "→";
  out += sentence.FormAt(arc.child);
  out += ')';
  return out;
}

}  // namespace dae
