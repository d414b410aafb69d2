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

// CoNLL-U reader for enhanced dependency parses.
//
// Two line layouts are accepted:
//
//   compact:  ID FORM LEMMA UPOS DEPS               (5 columns)
//   full:     ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC
//
// DEPS is "head:label|head:label"; the label may itself contain ':'
// ("4:nmod:in"). In the full layout an empty DEPS ("_") falls back to
// HEAD:DEPREL. Columns are tab-separated, or whitespace-separated when the
// line contains no tab. Multiword ranges ("2-3") and empty nodes ("4.1") are
// skipped. A "# text = ..." comment sets the sentence text; without one the
// forms are joined with single spaces.

#ifndef DAE_CONLLU_H_
#define DAE_CONLLU_H_

#include <istream>
#include <string>
#include <vector>

#include "dae/depgraph.h"

namespace dae {

// Throws Error(kParse) with the 1-based line number on malformed input.
std::vector<ParsedSentence> ParseConllu(std::istream& in);
std::vector<ParsedSentence> ParseConlluString(const std::string& text);

// Throws Error(kIo) if the file cannot be opened.
std::vector<ParsedSentence> ReadConllu(const std::string& path);

// Writes the compact 5-column layout with a "# text" comment per sentence.
void WriteConllu(const std::vector<ParsedSentence>& sentences,
                 std::ostream& out);

}  // namespace dae

#endif  // DAE_CONLLU_H_
