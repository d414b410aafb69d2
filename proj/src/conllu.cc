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

#include "dae/conllu.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "dae/error.h"

namespace dae {
namespace {

std::vector<std::string_view> SplitColumns(std::string_view line) {
  std::vector<std::string_view> cols;
  const bool tabbed = line.find('\t') != std::string_view::npos;
  size_t pos = 0;
  while (pos <= line.size()) {
    if (!tabbed) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\r')) {
        ++pos;
      }
      if (pos == line.size()) break;
    }
    size_t end = tabbed ? line.find('\t', pos) : line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view col = line.substr(pos, end - pos);
    while (!col.empty() && col.back() == '\r') col.remove_suffix(1);
    cols.push_back(col);
    pos = end + 1;
  }
  return cols;
}

bool ParseInt(std::string_view s, int* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void Fail(int line_no, const std::string& what) {
  throw Error(ErrorCode::kParse,
              "line " + std::to_string(line_no) + ": " + what);
}

std::string Field(std::string_view col) {
  return col == "_" ? std::string() : std::string(col);
}

void ParseDeps(std::string_view deps, int child, int line_no,
               std::vector<DependencyArc>* arcs) {
  if (deps == "_" || deps.empty()) return;
  size_t pos = 0;
  while (pos <= deps.size()) {
    size_t end = deps.find('|', pos);
    if (end == std::string_view::npos) end = deps.size();
    std::string_view item = deps.substr(pos, end - pos);
    const size_t colon = item.find(':');
    int head = 0;
    if (colon == std::string_view::npos || colon + 1 == item.size() ||
        !ParseInt(item.substr(0, colon), &head)) {
      Fail(line_no, "malformed dependency '" + std::string(item) + "'");
    }
    arcs->push_back(
        DependencyArc{head, child, std::string(item.substr(colon + 1))});
    pos = end + 1;
  }
}

struct PendingArc {
  DependencyArc arc;
  int line_no;
};

class BlockBuilder {
 public:
  void SetText(std::string text) { text_ = std::move(text); }

  void AddLine(std::string_view line, int line_no) {
    const std::vector<std::string_view> cols = SplitColumns(line);
    if (cols.size() != 5 && cols.size() != 10) {
      Fail(line_no, "expected 5 or 10 columns, found " +
                        std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) return;
    int id = 0;
    if (!ParseInt(cols[0], &id)) {
      Fail(line_no, "bad token id '" + std::string(cols[0]) + "'");
    }
    if (id != static_cast<int>(sentence_.tokens.size()) + 1) {
      Fail(line_no, "token id " + std::to_string(id) + " out of sequence");
    }
    if (cols[1].empty()) Fail(line_no, "empty form");
    sentence_.tokens.push_back(Token{id, std::string(cols[1]),
                                     Field(cols[3]), Field(cols[2])});

    std::vector<DependencyArc> arcs;
    if (cols.size() == 5) {
      ParseDeps(cols[4], id, line_no, &arcs);
    } else if (cols[8] != "_") {
      ParseDeps(cols[8], id, line_no, &arcs);
    } else if (cols[6] != "_") {
      int head = 0;
      if (!ParseInt(cols[6], &head)) Fail(line_no, "bad HEAD column");
      arcs.push_back(DependencyArc{head, id, std::string(cols[7])});
    }
    for (DependencyArc& arc : arcs) {
      pending_.push_back(PendingArc{std::move(arc), line_no});
    }
  }

  bool empty() const { return sentence_.tokens.empty(); }

  ParsedSentence Finish() {
    const int n = sentence_.size();
    for (PendingArc& p : pending_) {
      if (p.arc.head < 0 || p.arc.head > n || p.arc.head == p.arc.child) {
        Fail(p.line_no, "head " + std::to_string(p.arc.head) +
                            " out of range for sentence of " +
                            std::to_string(n) + " tokens");
      }
      sentence_.arcs.push_back(std::move(p.arc));
    }
    sentence_.text = text_.empty() ? JoinForms(sentence_.tokens) : text_;
    ParsedSentence out = std::move(sentence_);
    *this = BlockBuilder();
    return out;
  }

 private:
  ParsedSentence sentence_;
  std::vector<PendingArc> pending_;
  std::string text_;
};

}  // namespace

std::vector<ParsedSentence> ParseConllu(std::istream& in) {
  std::vector<ParsedSentence> out;
  BlockBuilder block;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) {
      view.remove_suffix(1);
    }
    if (view.empty()) {
      if (!block.empty()) out.push_back(block.Finish());
      continue;
    }
    if (view.front() == '#') {
      constexpr std::string_view kText = "text";
      std::string_view body = view.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      if (body.substr(0, kText.size()) == kText) {
        body.remove_prefix(kText.size());
        while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        if (!body.empty() && body.front() == '=') {
          body.remove_prefix(1);
          while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
          block.SetText(std::string(body));
        }
      }
      continue;
    }
    block.AddLine(view, line_no);
  }
  if (!block.empty()) out.push_back(block.Finish());
  return out;
}

std::vector<ParsedSentence> ParseConlluString(const std::string& text) {
  std::istringstream in(text);
  return ParseConllu(in);
}

std::vector<ParsedSentence> ReadConllu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ParseConllu(in);
}

void WriteConllu(const std::vector<ParsedSentence>& sentences,
                 std::ostream& out) {
  for (const ParsedSentence& s : sentences) {
    out << "# text = " << s.text << '\n';
    for (const Token& t : s.tokens) {
      std::string deps;
      for (const DependencyArc& arc : s.arcs) {
        if (arc.child != t.index) continue;
        if (!deps.empty()) deps += '|';
        deps += std::to_string(arc.head) + ':' + arc.label;
      }
      out << t.index << '\t' << t.form << '\t'
          << (t.lemma.empty() ? "_" : t.lemma) << '\t'
          << (t.pos.empty() ? "_" : t.pos) << '\t'
          << (deps.empty() ? "_" : deps) << '\n';
    }
    out << '\n';
  }
}

}  // namespace dae
