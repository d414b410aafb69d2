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

#include "dae/augment.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "dae/error.h"
#include "dae/random.h"

namespace dae {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

ArcAnnotatedExample LabelAgainst(const ParsedSentence& premise,
                                 const ParsedSentence& hypothesis,
                                 Provenance provenance) {
  const ArcKeySet original = MakeArcSet(premise);
  ArcAnnotatedExample ex;
  ex.premise = premise;
  ex.hypothesis = hypothesis;
  ex.provenance = provenance;
  for (const DependencyArc& arc : FilterSemanticArcs(hypothesis)) {
    const bool kept = original.count(MakeArcKey(arc, hypothesis)) > 0;
    ex.annotations.push_back(ArcAnnotation{
        arc, kept ? Entailment::kEntailed : Entailment::kNonEntailed});
  }
  return ex;
}

}  // namespace

ArcAnnotatedExample WordSwapAt(const ParsedSentence& x,
                               std::span<const std::pair<int, int>> swaps) {
  ParsedSentence swapped = x;
  std::vector<bool> used(x.size() + 1, false);
  for (const auto& [i, j] : swaps) {
    if (i < 1 || j < 1 || i > x.size() || j > x.size() || i == j ||
        used[i] || used[j]) {
      throw Error(ErrorCode::kPrecondition,
                  "swap (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") is not a disjoint pair of distinct tokens");
    }
    used[i] = used[j] = true;
    Token& a = swapped.tokens[i - 1];
    Token& b = swapped.tokens[j - 1];
    std::swap(a.form, b.form);
    std::swap(a.lemma, b.lemma);
  }
  swapped.text = JoinForms(swapped.tokens);
  return LabelAgainst(x, swapped, Provenance::kWordSwap);
}

ArcAnnotatedExample WordSwap(const ParsedSentence& x,
                             const SwapConfig& config) {
  if (config.num_swaps < 1 || config.num_swaps > x.size() / 2) {
    throw Error(ErrorCode::kPrecondition,
                "num_swaps must lie in [1, tokens/2]");
  }
  std::vector<std::pair<int, int>> eligible;
  for (int i = 1; i <= x.size(); ++i) {
    for (int j = i + 1; j <= x.size(); ++j) {
      const Token& a = x.tokens[i - 1];
      const Token& b = x.tokens[j - 1];
      if (!a.pos.empty() && a.pos == b.pos && Lower(a.form) != Lower(b.form)) {
        eligible.emplace_back(i, j);
      }
    }
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::kNoOp, "no swappable same-POS pair in '" +
                                      x.text + "'");
  }
  Rng rng(config.rng_seed);
  Shuffle(eligible, rng);
  std::vector<std::pair<int, int>> chosen;
  std::vector<bool> used(x.size() + 1, false);
  for (const auto& [i, j] : eligible) {
    if (used[i] || used[j]) continue;
    used[i] = used[j] = true;
    chosen.emplace_back(i, j);
    if (static_cast<int>(chosen.size()) == config.num_swaps) break;
  }
  if (static_cast<int>(chosen.size()) < config.num_swaps) {
    throw Error(ErrorCode::kPrecondition,
                "only " + std::to_string(chosen.size()) +
                    " disjoint swappable pairs available");
  }
  return WordSwapAt(x, chosen);
}

WordVectors WordVectors::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  WordVectors vectors;
  std::string line;
  int line_no = 0;
  size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> v;
    double value;
    while (fields >> value) v.push_back(value);
    if (!fields.eof() || v.empty() || (dim != 0 && v.size() != dim)) {
      throw Error(ErrorCode::kParse,
                  path + ": line " + std::to_string(line_no) +
                      ": malformed vector");
    }
    dim = v.size();
    vectors.Add(std::move(word), std::move(v));
  }
  return vectors;
}

void WordVectors::Add(std::string word, std::vector<double> vector) {
  if (dim_ != 0 && static_cast<int>(vector.size()) != dim_) {
    throw Error(ErrorCode::kPrecondition,
                "vector for '" + word + "' has the wrong dimension");
  }
  dim_ = static_cast<int>(vector.size());
  vectors_[Lower(word)] = std::move(vector);
}

const std::vector<double>* WordVectors::Find(std::string_view word) const {
  auto it = vectors_.find(Lower(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

WordSimilarity MakeSimilarity(const WordVectors* vectors) {
  return [vectors](std::string_view a, std::string_view b) -> double {
    if (Lower(a) == Lower(b)) return 1.0;
    if (vectors == nullptr) return 0.0;
    const std::vector<double>* va = vectors->Find(a);
    const std::vector<double>* vb = vectors->Find(b);
    if (va == nullptr || vb == nullptr || va->size() != vb->size()) return 0.0;
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < va->size(); ++i) {
      dot += (*va)[i] * (*vb)[i];
      na += (*va)[i] * (*va)[i];
      nb += (*vb)[i] * (*vb)[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / std::sqrt(na * nb);
  };
}

Alignment AlignWords(const ParsedSentence& source, const ParsedSentence& gold,
                     const WordSimilarity& similarity, double threshold) {
  struct Candidate {
    double sim;
    int i;
    int j;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < source.size(); ++i) {
    for (int j = 0; j < gold.size(); ++j) {
      const double sim =
          similarity(source.tokens[i].form, gold.tokens[j].form);
      if (sim >= threshold) candidates.push_back({sim, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.sim != b.sim) return a.sim > b.sim;
              return std::tie(a.i, a.j) < std::tie(b.i, b.j);
            });
  std::vector<bool> source_used(source.size(), false);
  std::vector<bool> gold_used(gold.size(), false);
  Alignment alignment;
  const double norm = std::max(source.size(), gold.size());
  double total = 0;
  for (const Candidate& c : candidates) {
    if (source_used[c.i] || gold_used[c.j]) continue;
    source_used[c.i] = gold_used[c.j] = true;
    alignment.pairs.emplace_back(c.i, c.j);
    total += std::abs(c.i - c.j) / norm;
  }
  std::sort(alignment.pairs.begin(), alignment.pairs.end());
  if (gold.size() > 0) {
    alignment.coverage =
        static_cast<double>(alignment.pairs.size()) / gold.size();
  }
  if (!alignment.pairs.empty()) {
    alignment.mean_displacement = total / alignment.pairs.size();
  }
  return alignment;
}

std::vector<ArcAnnotatedExample> SelectSynonymPairs(
    std::span<const ParaphrasePair> pairs, const AlignmentConfig& config,
    const WordSimilarity& similarity) {
  std::vector<ArcAnnotatedExample> out;
  for (const ParaphrasePair& pair : pairs) {
    const Alignment a = AlignWords(pair.source, pair.gold, similarity,
                                   config.similarity_threshold);
    if (a.coverage < 0.5) continue;
    if (a.mean_displacement > config.max_mean_displacement) continue;
    ArcAnnotatedExample ex;
    ex.premise = pair.source;
    ex.hypothesis = pair.gold;
    ex.provenance = Provenance::kSynonym;
    for (const DependencyArc& arc : FilterSemanticArcs(pair.gold)) {
      ex.annotations.push_back(ArcAnnotation{arc, Entailment::kEntailed});
    }
    if (!ex.annotations.empty()) out.push_back(std::move(ex));
  }
  return out;
}

ParsedSentence RemoveSpan(const ParsedSentence& x, int start, int length) {
  if (length < 1 || start < 0 || start + length > x.size()) {
    throw Error(ErrorCode::kPrecondition,
                "span [" + std::to_string(start) + ", " +
                    std::to_string(start + length) + ") invalid for " +
                    std::to_string(x.size()) + " tokens");
  }
  // new_index[old] for 1-based old indices; 0 keeps ROOT, -1 marks removed.
  std::vector<int> new_index(x.size() + 1, -1);
  new_index[0] = 0;
  ParsedSentence out;
  for (int i = 0; i < x.size(); ++i) {
    if (i >= start && i < start + length) continue;
    Token t = x.tokens[i];
    t.index = out.size() + 1;
    new_index[i + 1] = t.index;
    out.tokens.push_back(std::move(t));
  }
  for (const DependencyArc& arc : x.arcs) {
    const int head = new_index[arc.head];
    const int child = new_index[arc.child];
    if (head < 0 || child < 0) continue;
    out.arcs.push_back(DependencyArc{head, child, arc.label});
  }
  out.text = JoinForms(out.tokens);
  return out;
}

ArcAnnotatedExample HallucinateSpanAt(const ParsedSentence& x, int start,
                                      int length) {
  const ParsedSentence premise = RemoveSpan(x, start, length);
  const ArcKeySet kept = MakeArcSet(premise);
  ArcAnnotatedExample ex;
  ex.premise = premise;
  ex.hypothesis = x;
  ex.provenance = Provenance::kHallucinationSpan;
  for (const DependencyArc& arc : FilterSemanticArcs(x)) {
    std::optional<Entailment> label;
    if (kept.count(MakeArcKey(arc, x)) == 0) label = Entailment::kNonEntailed;
    ex.annotations.push_back(ArcAnnotation{arc, label});
  }
  return ex;
}

ArcAnnotatedExample HallucinateSpan(const ParsedSentence& x,
                                    uint64_t rng_seed) {
  const int n = x.size();
  if (n < 4) {
    throw Error(ErrorCode::kPrecondition,
                "span hallucination needs at least 4 tokens");
  }
  Rng rng(rng_seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const int length = static_cast<int>(UniformInt(rng, 1, n - 2));
    const int start = static_cast<int>(UniformInt(rng, 0, n - length));
    ArcAnnotatedExample ex = HallucinateSpanAt(x, start, length);
    if (ex.premise.size() > 0 && ex.NumLabeled() > 0) return ex;
  }
  throw Error(ErrorCode::kNoOp,
              "no span removal produced a non-entailed arc for '" + x.text +
                  "'");
}

double UnigramOverlap(const ParsedSentence& x, const ParsedSentence& other) {
  if (other.size() == 0) return 0.0;
  std::map<std::string, int> bag;
  for (const Token& t : x.tokens) ++bag[Lower(t.form)];
  int shared = 0;
  for (const Token& t : other.tokens) {
    auto it = bag.find(Lower(t.form));
    if (it != bag.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  return static_cast<double>(shared) / other.size();
}

std::vector<ArcAnnotatedExample> HallucinateOverlap(
    std::span<const ParsedSentence> corpus) {
  if (corpus.size() < 2) {
    throw Error(ErrorCode::kPrecondition,
                "overlap hallucination needs at least 2 sentences");
  }
  std::vector<ArcAnnotatedExample> out;
  for (size_t i = 0; i < corpus.size(); ++i) {
    double best = 0.0;
    size_t best_j = i;
    for (size_t j = 0; j < corpus.size(); ++j) {
      if (j == i) continue;
      const double overlap = UnigramOverlap(corpus[i], corpus[j]);
      if (overlap > best) {
        best = overlap;
        best_j = j;
      }
    }
    if (best_j == i) continue;
    ArcAnnotatedExample ex;
    ex.premise = corpus[i];
    ex.hypothesis = corpus[best_j];
    ex.provenance = Provenance::kHallucinationOverlap;
    for (const DependencyArc& arc : FilterSemanticArcs(ex.hypothesis)) {
      ex.annotations.push_back(ArcAnnotation{arc, Entailment::kNonEntailed});
    }
    if (!ex.annotations.empty()) out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace dae
