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

// Contextual encoders for (premise; hypothesis) pairs.
//
// An encoder maps the word sequences of a premise and a hypothesis to one
// vector per hypothesis word, contextualized over the concatenation
//
//   premise subwords  [SEP]  hypothesis subwords
//
// A word's vector is the output at its first subword. When the sequence is
// longer than max_len subwords, whole premise words are dropped from the
// left; hypothesis words are never dropped.

#ifndef DAE_ENCODER_H_
#define DAE_ENCODER_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dae/parameters.h"
#include "json.hpp"

namespace dae {

// Greedy longest-match subword vocabulary over lowercased words. Every byte
// seen at build time is in the vocabulary both as a word-initial piece "c"
// and as a continuation "##c", so any word made of known bytes tokenizes.
class SubwordVocab {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kSep = 1;

  SubwordVocab();
  // Whole words occurring at least `min_count` times become single pieces.
  static SubwordVocab Build(std::span<const std::string> words,
                            int min_count = 1);
  static SubwordVocab FromPieces(std::vector<std::string> pieces);

  std::vector<int> Tokenize(std::string_view word) const;
  int size() const { return static_cast<int>(pieces_.size()); }
  const std::vector<std::string>& pieces() const { return pieces_; }

 private:
  void Add(const std::string& piece);
  int Find(const std::string& piece) const;

  std::vector<std::string> pieces_;
  std::unordered_map<std::string, int> index_;
};

// Forward activations kept for the backward pass.
class EncoderState {
 public:
  virtual ~EncoderState() = default;
};

struct Encoding {
  Matrix words;  // hypothesis words x dim
  bool truncated = false;
  int premise_words_dropped = 0;
  // Full sequence output and the row of each hypothesis word's first subword.
  Matrix sequence;
  std::vector<int> word_rows;
  std::unique_ptr<EncoderState> state;
};

class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual std::string kind() const = 0;
  virtual int dim() const = 0;
  virtual Encoding Encode(std::span<const std::string> premise,
                          std::span<const std::string> hypothesis,
                          bool keep_state) const = 0;
  // Accumulates parameter gradients from d(loss)/d(encoding.words).
  // `encoding` must come from Encode(..., keep_state = true).
  virtual void Backward(const Encoding& encoding, const Matrix& grad_words) = 0;
  virtual ParameterList Parameters() = 0;
  // Everything needed to rebuild the encoder, minus parameter values.
  virtual nlohmann::json Config() const = 0;
};

struct ToyEncoderConfig {
  int dim = 64;
  int layers = 2;
  int heads = 4;
  int ffn_dim = 128;
  int max_len = 128;
  int min_count = 1;
  // Multiple of the identity added to every query and key projection at
  // initialization, so attention starts out matching similar vectors.
  double attention_identity = 1.0;
  uint64_t seed = 0;
};

// Small pre-LayerNorm transformer trained from scratch. Token, segment and
// segment-relative position embeddings are summed at the input; positions
// restart at zero on the hypothesis side so aligned words share positions.
class ToyEncoder : public Encoder {
 public:
  ToyEncoder(const ToyEncoderConfig& config, SubwordVocab vocab);

  static std::unique_ptr<ToyEncoder> FromConfig(const nlohmann::json& config);

  std::string kind() const override { return "toy"; }
  int dim() const override { return config_.dim; }
  Encoding Encode(std::span<const std::string> premise,
                  std::span<const std::string> hypothesis,
                  bool keep_state) const override;
  void Backward(const Encoding& encoding, const Matrix& grad_words) override;
  ParameterList Parameters() override;
  nlohmann::json Config() const override;

  const SubwordVocab& vocab() const { return vocab_; }
  const ToyEncoderConfig& config() const { return config_; }

 private:
  struct Layer {
    Parameter ln1_gain, ln1_bias;
    Parameter query, key, value, output, output_bias;
    Parameter ln2_gain, ln2_bias;
    Parameter ffn_in, ffn_in_bias, ffn_out, ffn_out_bias;
  };
  struct State;

  ToyEncoderConfig config_;
  SubwordVocab vocab_;
  Parameter token_embedding_;
  Parameter position_embedding_;
  Parameter segment_embedding_;
  std::vector<Layer> layers_;
  Parameter final_gain_, final_bias_;
};

// Adapter for an externally supplied encoder. The callback receives the
// premise and hypothesis words and returns one row per hypothesis word. The
// adapter has no trainable parameters; only the arc head is trained on top.
class ExternalEncoder : public Encoder {
 public:
  using Callback = std::function<Matrix(std::span<const std::string> premise,
                                        std::span<const std::string> hypothesis)>;

  ExternalEncoder(int dim, Callback callback, nlohmann::json config = {});

  std::string kind() const override { return "external"; }
  int dim() const override { return dim_; }
  Encoding Encode(std::span<const std::string> premise,
                  std::span<const std::string> hypothesis,
                  bool keep_state) const override;
  void Backward(const Encoding&, const Matrix&) override {}
  ParameterList Parameters() override { return {}; }
  nlohmann::json Config() const override { return config_; }

 private:
  int dim_;
  Callback callback_;
  nlohmann::json config_;
};

class WordVectors;

// External encoder backed by static word vectors: each hypothesis word maps
// to [vector; max cosine similarity to any premise word]. Unknown words get
// a zero vector.
std::unique_ptr<ExternalEncoder> MakeStaticVectorEncoder(
    std::shared_ptr<const WordVectors> vectors, const std::string& source);

}  // namespace dae

#endif  // DAE_ENCODER_H_
