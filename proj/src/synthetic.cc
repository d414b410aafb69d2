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

#include "dae/synthetic.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <utility>

#include "dae/error.h"

namespace dae {
namespace {

using Group = std::vector<std::string>;

struct Lexicon {
  std::vector<Group> nouns = {
      {"car", "automobile"}, {"film", "movie"},   {"doctor", "physician"},
      {"child", "kid"},      {"house", "home"},   {"road", "street"},
      {"shop", "store"},     {"lawyer", "attorney"}, {"boat", "ship"},
      {"gift", "present"},   {"dog"},             {"cat"},
      {"teacher"},           {"city"},            {"river"},
      {"book"},              {"letter"},          {"garden"},
      {"farmer"},            {"king"},            {"bridge"},
      {"window"},            {"soldier"},         {"painter"},
  };
  std::vector<Group> verbs = {
      {"bought", "purchased"}, {"built", "constructed"},
      {"helped", "assisted"},  {"started", "initiated"},
      {"saw", "noticed"},      {"liked", "enjoyed"},
      {"chased"},              {"visited"},
      {"painted"},             {"found"},
      {"carried"},             {"cleaned"},
  };
  std::vector<Group> adjectives = {
      {"big", "large"},    {"small", "little"}, {"quick", "fast"},
      {"happy", "glad"},   {"smart", "clever"}, {"angry", "furious"},
      {"red"},             {"green"},           {"quiet"},
      {"old"},             {"young"},           {"brave"},
  };
  std::vector<Group> adverbs = {
      {"quickly", "rapidly"}, {"slowly"}, {"quietly", "silently"}, {"rarely"},
  };
  std::vector<std::string> function_words = {"the", "and", "of", "in",
                                             "was", "by",  "."};

  // word -> (pos, group) for content words.
  std::map<std::string, std::pair<std::string, const Group*>> index;

  Lexicon() {
    for (const auto& [pos, groups] :
         {std::pair<const char*, const std::vector<Group>*>{"NOUN", &nouns},
          {"VERB", &verbs},
          {"ADJ", &adjectives},
          {"ADV", &adverbs}}) {
      for (const Group& g : *groups) {
        for (const std::string& w : g) index[w] = {pos, &g};
      }
    }
  }

  const std::vector<Group>& GroupsFor(std::string_view pos) const {
    if (pos == "NOUN") return nouns;
    if (pos == "VERB") return verbs;
    if (pos == "ADJ") return adjectives;
    return adverbs;
  }
};

const Lexicon& Lex() {
  static const Lexicon* lexicon = new Lexicon();
  return *lexicon;
}

class Builder {
 public:
  int Add(std::string form, std::string pos) {
    const int index = static_cast<int>(s_.tokens.size()) + 1;
    s_.tokens.push_back(Token{index, std::move(form), std::move(pos), ""});
    return index;
  }
  void Arc(int head, int child, std::string label) {
    s_.arcs.push_back(DependencyArc{head, child, std::move(label)});
  }
  ParsedSentence Done() {
    s_.text = JoinForms(s_.tokens);
    return std::move(s_);
  }

 private:
  ParsedSentence s_;
};

ParsedSentence WithForm(const ParsedSentence& x, int index, std::string form) {
  ParsedSentence out = x;
  out.tokens[index - 1].form = std::move(form);
  out.text = JoinForms(out.tokens);
  return out;
}

const Group* GroupOf(std::string_view word) {
  auto it = Lex().index.find(std::string(word));
  return it == Lex().index.end() ? nullptr : it->second.second;
}

}  // namespace

SyntheticCorpus::SyntheticCorpus(uint64_t seed)
    : rng_(SplitSeed(seed, "synthetic")) {}

const std::string& SyntheticCorpus::Pick(const std::vector<std::string>& words) {
  return words[UniformInt(rng_, 0, static_cast<int64_t>(words.size()) - 1)];
}

ParsedSentence SyntheticCorpus::Sentence() {
  const Lexicon& lex = Lex();
  auto pick_group = [&](const std::vector<Group>& groups) -> const Group& {
    return groups[UniformInt(rng_, 0, static_cast<int64_t>(groups.size()) - 1)];
  };
  // Distinct noun groups within one sentence.
  std::vector<const Group*> used;
  auto noun = [&]() -> std::string {
    while (true) {
      const Group& g = pick_group(lex.nouns);
      bool seen = false;
      for (const Group* u : used) seen = seen || u == &g;
      if (seen) continue;
      used.push_back(&g);
      return Pick(g);
    }
  };
  auto word = [&](const std::vector<Group>& groups) {
    return Pick(pick_group(groups));
  };

  Builder b;
  switch (UniformInt(rng_, 0, 4)) {
    case 0: {  // the ADJ N1 V the N2 in the N3 .
      const int d1 = b.Add("the", "DET");
      const int a = b.Add(word(lex.adjectives), "ADJ");
      const int n1 = b.Add(noun(), "NOUN");
      const int v = b.Add(word(lex.verbs), "VERB");
      const int d2 = b.Add("the", "DET");
      const int n2 = b.Add(noun(), "NOUN");
      const int p = b.Add("in", "ADP");
      const int d3 = b.Add("the", "DET");
      const int n3 = b.Add(noun(), "NOUN");
      const int dot = b.Add(".", "PUNCT");
      b.Arc(n1, d1, "det");
      b.Arc(n1, a, "amod");
      b.Arc(v, n1, "nsubj");
      b.Arc(0, v, "root");
      b.Arc(n2, d2, "det");
      b.Arc(v, n2, "obj");
      b.Arc(n3, p, "case");
      b.Arc(n3, d3, "det");
      b.Arc(v, n3, "obl:in");
      b.Arc(v, dot, "punct");
      break;
    }
    case 1: {  // the N1 V the ADJ N2 .
      const int d1 = b.Add("the", "DET");
      const int n1 = b.Add(noun(), "NOUN");
      const int v = b.Add(word(lex.verbs), "VERB");
      const int d2 = b.Add("the", "DET");
      const int a = b.Add(word(lex.adjectives), "ADJ");
      const int n2 = b.Add(noun(), "NOUN");
      const int dot = b.Add(".", "PUNCT");
      b.Arc(n1, d1, "det");
      b.Arc(v, n1, "nsubj");
      b.Arc(0, v, "root");
      b.Arc(n2, d2, "det");
      b.Arc(n2, a, "amod");
      b.Arc(v, n2, "obj");
      b.Arc(v, dot, "punct");
      break;
    }
    case 2: {  // the N1 and the N2 V the N3 .
      const int d1 = b.Add("the", "DET");
      const int n1 = b.Add(noun(), "NOUN");
      const int cc = b.Add("and", "CCONJ");
      const int d2 = b.Add("the", "DET");
      const int n2 = b.Add(noun(), "NOUN");
      const int v = b.Add(word(lex.verbs), "VERB");
      const int d3 = b.Add("the", "DET");
      const int n3 = b.Add(noun(), "NOUN");
      const int dot = b.Add(".", "PUNCT");
      b.Arc(n1, d1, "det");
      b.Arc(n2, cc, "cc");
      b.Arc(n2, d2, "det");
      b.Arc(n1, n2, "conj:and");
      b.Arc(v, n1, "nsubj");
      b.Arc(v, n2, "nsubj");
      b.Arc(0, v, "root");
      b.Arc(n3, d3, "det");
      b.Arc(v, n3, "obj");
      b.Arc(v, dot, "punct");
      break;
    }
    case 3: {  // the N1 of the N2 V the N3 ADV .
      const int d1 = b.Add("the", "DET");
      const int n1 = b.Add(noun(), "NOUN");
      const int of = b.Add("of", "ADP");
      const int d2 = b.Add("the", "DET");
      const int n2 = b.Add(noun(), "NOUN");
      const int v = b.Add(word(lex.verbs), "VERB");
      const int d3 = b.Add("the", "DET");
      const int n3 = b.Add(noun(), "NOUN");
      const int adv = b.Add(word(lex.adverbs), "ADV");
      const int dot = b.Add(".", "PUNCT");
      b.Arc(n1, d1, "det");
      b.Arc(n2, of, "case");
      b.Arc(n2, d2, "det");
      b.Arc(n1, n2, "nmod:of");
      b.Arc(v, n1, "nsubj");
      b.Arc(0, v, "root");
      b.Arc(n3, d3, "det");
      b.Arc(v, n3, "obj");
      b.Arc(v, adv, "advmod");
      b.Arc(v, dot, "punct");
      break;
    }
    default: {  // the ADJ N1 was V by the N2 .
      const int d1 = b.Add("the", "DET");
      const int a = b.Add(word(lex.adjectives), "ADJ");
      const int n1 = b.Add(noun(), "NOUN");
      const int aux = b.Add("was", "AUX");
      const int v = b.Add(word(lex.verbs), "VERB");
      const int by = b.Add("by", "ADP");
      const int d2 = b.Add("the", "DET");
      const int n2 = b.Add(noun(), "NOUN");
      const int dot = b.Add(".", "PUNCT");
      b.Arc(n1, d1, "det");
      b.Arc(n1, a, "amod");
      b.Arc(v, n1, "nsubj:pass");
      b.Arc(v, aux, "aux:pass");
      b.Arc(0, v, "root");
      b.Arc(n2, by, "case");
      b.Arc(n2, d2, "det");
      b.Arc(v, n2, "obl:by");
      b.Arc(v, dot, "punct");
      break;
    }
  }
  return b.Done();
}

ParsedSentence SyntheticCorpus::SynonymVariant(const ParsedSentence& x,
                                               int replacements) {
  std::vector<int> candidates;
  for (const Token& t : x.tokens) {
    const Group* g = GroupOf(t.form);
    if (g != nullptr && g->size() > 1) candidates.push_back(t.index);
  }
  Shuffle(candidates, rng_);
  ParsedSentence out = x;
  for (int i = 0; i < replacements && i < static_cast<int>(candidates.size());
       ++i) {
    const int index = candidates[i];
    const Group& g = *GroupOf(out.tokens[index - 1].form);
    std::vector<std::string> others;
    for (const std::string& w : g) {
      if (w != out.tokens[index - 1].form) others.push_back(w);
    }
    out = WithForm(out, index, Pick(others));
  }
  return out;
}

ParaphrasePair SyntheticCorpus::SynonymParaphrase() {
  while (true) {
    ParsedSentence x = Sentence();
    ParsedSentence h = SynonymVariant(x, 1 + UniformInt(rng_, 0, 1));
    if (h != x) return ParaphrasePair{std::move(x), std::move(h)};
  }
}

ParsedSentence SyntheticCorpus::Substitution(const ParsedSentence& x) {
  std::vector<int> content;
  for (const Token& t : x.tokens) {
    if (GroupOf(t.form) != nullptr) content.push_back(t.index);
  }
  if (content.empty()) {
    throw Error(ErrorCode::kPrecondition, "no content word to substitute");
  }
  const int index = content[UniformInt(
      rng_, 0, static_cast<int64_t>(content.size()) - 1)];
  const Token& t = x.tokens[index - 1];
  const Group* current = GroupOf(t.form);
  const std::vector<Group>& groups = Lex().GroupsFor(t.pos);
  while (true) {
    const Group& g =
        groups[UniformInt(rng_, 0, static_cast<int64_t>(groups.size()) - 1)];
    if (&g == current) continue;
    return WithForm(x, index, Pick(g));
  }
}

BeamRecord SyntheticCorpus::Beam(int k) {
  if (k < 4) throw Error(ErrorCode::kPrecondition, "beam size must be >= 4");
  BeamRecord record;
  ParaphrasePair pair = SynonymParaphrase();
  record.source = pair.source;
  record.gold = pair.gold;
  record.candidates.push_back(UniformInt(rng_, 0, 2) == 0
                                  ? Substitution(record.source)
                                  : SynonymVariant(record.source, 1));
  for (int i = 1; i < k - 3; ++i) {
    record.candidates.push_back(UniformInt(rng_, 0, 1) == 0
                                    ? SynonymVariant(record.source, 2)
                                    : Substitution(record.source));
  }
  std::vector<int> nouns;
  for (const Token& t : record.source.tokens) {
    if (t.pos == "NOUN") nouns.push_back(t.index);
  }
  Shuffle(nouns, rng_);
  const std::pair<int, int> swap[] = {{nouns[0], nouns[1]}};
  record.candidates.push_back(WordSwapAt(record.source, swap).hypothesis);
  record.candidates.push_back(Substitution(record.source));
  record.candidates.push_back(Substitution(record.candidates.front()));
  return record;
}

WordVectors SyntheticCorpus::Vectors(int dim, uint64_t seed) {
  WordVectors vectors;
  auto gaussian = [dim](Rng& rng) {
    std::vector<double> v(dim);
    for (double& x : v) x = Gaussian(rng);
    return v;
  };
  int group_id = 0;
  const Lexicon& lex = Lex();
  for (const std::vector<Group>* groups :
       {&lex.nouns, &lex.verbs, &lex.adjectives, &lex.adverbs}) {
    for (const Group& g : *groups) {
      Rng rng(SplitSeed(seed, "vectors:" + std::to_string(group_id++)));
      const std::vector<double> base = gaussian(rng);
      for (const std::string& w : g) {
        std::vector<double> v = gaussian(rng);
        for (int i = 0; i < dim; ++i) v[i] = base[i] + 0.15 * v[i];
        vectors.Add(w, std::move(v));
      }
    }
  }
  for (const std::string& w : lex.function_words) {
    Rng rng(SplitSeed(seed, "vectors:" + w));
    vectors.Add(w, gaussian(rng));
  }
  return vectors;
}

void SyntheticCorpus::WriteVectors(const std::string& path, int dim,
                                   uint64_t seed) {
  const WordVectors vectors = Vectors(dim, seed);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  std::vector<std::string> words;
  const Lexicon& lex = Lex();
  for (const auto& [w, unused] : lex.index) words.push_back(w);
  for (const std::string& w : lex.function_words) words.push_back(w);
  char buf[32];
  for (const std::string& w : words) {
    out << w;
    for (double x : *vectors.Find(w)) {
      std::snprintf(buf, sizeof(buf), " %.6f", x);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

bool SyntheticCorpus::AreSynonyms(std::string_view a, std::string_view b) {
  const Group* ga = GroupOf(a);
  return ga != nullptr && ga == GroupOf(b);
}

}  // namespace dae
