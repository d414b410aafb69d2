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

#ifndef DAE_TESTS_TEST_UTIL_H_
#define DAE_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dae/depgraph.h"

namespace dae::testing {

struct Word {
  std::string form;
  std::string pos;
};

inline ParsedSentence MakeSentence(std::initializer_list<Word> words,
                                   std::initializer_list<DependencyArc> arcs) {
  ParsedSentence s;
  int i = 1;
  for (const Word& w : words) s.tokens.push_back(Token{i++, w.form, w.pos, ""});
  s.arcs.assign(arcs.begin(), arcs.end());
  s.text = JoinForms(s.tokens);
  return s;
}

// "the dog chased the cat ." with a basic parse.
inline ParsedSentence DogChasedCat() {
  return MakeSentence({{"the", "DET"},
                       {"dog", "NOUN"},
                       {"chased", "VERB"},
                       {"the", "DET"},
                       {"cat", "NOUN"},
                       {".", "PUNCT"}},
                      {{2, 1, "det"},
                       {3, 2, "nsubj"},
                       {0, 3, "root"},
                       {5, 4, "det"},
                       {3, 5, "obj"},
                       {3, 6, "punct"}});
}

// Per-test scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dae_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string File(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace dae::testing

#endif  // DAE_TESTS_TEST_UTIL_H_
