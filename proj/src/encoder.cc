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

#include "dae/encoder.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "dae/augment.h"
#include "dae/error.h"

namespace dae {
namespace {

constexpr double kLayerNormEps = 1e-5;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

struct LayerNormCache {
  Matrix normalized;
  Eigen::VectorXd inv_std;
};

Matrix LayerNormForward(const Matrix& x, const Matrix& gain,
                        const Matrix& bias, LayerNormCache* cache) {
  const Eigen::Index n = x.rows();
  const double d = static_cast<double>(x.cols());
  cache->normalized.resize(n, x.cols());
  cache->inv_std.resize(n);
  Matrix y(n, x.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    const double mean = x.row(r).sum() / d;
    const RowVector centered = x.row(r).array() - mean;
    const double var = centered.squaredNorm() / d;
    const double inv_std = 1.0 / std::sqrt(var + kLayerNormEps);
    cache->inv_std(r) = inv_std;
    cache->normalized.row(r) = centered * inv_std;
    y.row(r) = cache->normalized.row(r).cwiseProduct(gain.row(0)) + bias.row(0);
  }
  return y;
}

Matrix LayerNormBackward(const Matrix& grad_out, const LayerNormCache& cache,
                         const Matrix& gain, Matrix* grad_gain,
                         Matrix* grad_bias) {
  const Eigen::Index n = grad_out.rows();
  const double d = static_cast<double>(grad_out.cols());
  *grad_gain += grad_out.cwiseProduct(cache.normalized).colwise().sum();
  *grad_bias += grad_out.colwise().sum();
  Matrix grad_in(n, grad_out.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    const RowVector g = grad_out.row(r).cwiseProduct(gain.row(0));
    const RowVector& xhat = cache.normalized.row(r);
    const double mean_g = g.sum() / d;
    const double mean_gx = g.dot(xhat) / d;
    grad_in.row(r) =
        cache.inv_std(r) * (g.array() - mean_g - xhat.array() * mean_gx).matrix();
  }
  return grad_in;
}

void SoftmaxRowsInPlace(Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp();
    m.row(r) /= m.row(r).sum();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SubwordVocab

SubwordVocab::SubwordVocab() {
  Add("[UNK]");
  Add("[SEP]");
}

void SubwordVocab::Add(const std::string& piece) {
  if (index_.count(piece)) return;
  index_.emplace(piece, static_cast<int>(pieces_.size()));
  pieces_.push_back(piece);
}

int SubwordVocab::Find(const std::string& piece) const {
  auto it = index_.find(piece);
  return it == index_.end() ? -1 : it->second;
}

SubwordVocab SubwordVocab::Build(std::span<const std::string> words,
                                 int min_count) {
  std::map<std::string, int> counts;
  std::map<unsigned char, bool> bytes;
  for (const std::string& w : words) {
    const std::string lw = Lower(w);
    ++counts[lw];
    for (unsigned char c : lw) bytes[c] = true;
  }
  SubwordVocab vocab;
  for (const auto& [c, unused] : bytes) {
    vocab.Add(std::string(1, static_cast<char>(c)));
    vocab.Add("##" + std::string(1, static_cast<char>(c)));
  }
  for (const auto& [w, n] : counts) {
    if (n >= min_count) vocab.Add(w);
  }
  return vocab;
}

SubwordVocab SubwordVocab::FromPieces(std::vector<std::string> pieces) {
  if (pieces.size() < 2 || pieces[0] != "[UNK]" || pieces[1] != "[SEP]") {
    throw Error(ErrorCode::kModel, "vocabulary must start with [UNK], [SEP]");
  }
  SubwordVocab vocab;
  for (const std::string& p : pieces) vocab.Add(p);
  return vocab;
}

std::vector<int> SubwordVocab::Tokenize(std::string_view word) const {
  const std::string w = Lower(word);
  if (int id = Find(w); id >= 0) return {id};
  std::vector<int> ids;
  size_t start = 0;
  while (start < w.size()) {
    int found = -1;
    size_t end = w.size();
    for (; end > start; --end) {
      std::string piece = w.substr(start, end - start);
      if (start > 0) piece = "##" + piece;
      found = Find(piece);
      if (found >= 0) break;
    }
    if (found < 0) return {kUnk};
    ids.push_back(found);
    start = end;
  }
  if (ids.empty()) return {kUnk};
  return ids;
}

// ---------------------------------------------------------------------------
// ToyEncoder

struct ToyEncoder::State : EncoderState {
  struct LayerCache {
    Matrix input;
    LayerNormCache ln1;
    Matrix normed1;
    Matrix query, key, value;
    std::vector<Matrix> probs;
    Matrix attended;
    Matrix residual;
    LayerNormCache ln2;
    Matrix normed2;
    Matrix hidden_pre;
    Matrix hidden;
  };
  std::vector<int> ids;
  std::vector<int> positions;
  std::vector<int> segments;
  std::vector<LayerCache> layers;
  LayerNormCache final_ln;
};

ToyEncoder::ToyEncoder(const ToyEncoderConfig& config, SubwordVocab vocab)
    : config_(config), vocab_(std::move(vocab)) {
  if (config.dim % config.heads != 0) {
    throw Error(ErrorCode::kModel, "dim must be divisible by heads");
  }
  const int d = config.dim;
  Rng rng(config.seed);
  token_embedding_ = Parameter("encoder.token_embedding", vocab_.size(), d);
  position_embedding_ =
      Parameter("encoder.position_embedding", config.max_len, d);
  segment_embedding_ = Parameter("encoder.segment_embedding", 2, d);
  token_embedding_.InitGaussian(rng, 1.0 / std::sqrt(d));
  position_embedding_.InitGaussian(rng, 1.0 / std::sqrt(d));
  segment_embedding_.InitGaussian(rng, 1.0 / std::sqrt(d));
  const double out_scale = 1.0 / std::sqrt(2.0 * config.layers);
  for (int l = 0; l < config.layers; ++l) {
    const std::string prefix = "encoder.layer" + std::to_string(l) + ".";
    Layer layer;
    layer.ln1_gain = Parameter(prefix + "ln1_gain", 1, d);
    layer.ln1_gain.value.setOnes();
    layer.ln1_bias = Parameter(prefix + "ln1_bias", 1, d);
    layer.query = Parameter(prefix + "query", d, d);
    layer.key = Parameter(prefix + "key", d, d);
    layer.value = Parameter(prefix + "value", d, d);
    layer.output = Parameter(prefix + "output", d, d);
    layer.output_bias = Parameter(prefix + "output_bias", 1, d);
    layer.query.InitGaussian(rng, 1.0 / std::sqrt(d));
    layer.key.InitGaussian(rng, 1.0 / std::sqrt(d));
    layer.query.value.diagonal().array() += config.attention_identity;
    layer.key.value.diagonal().array() += config.attention_identity;
    layer.value.InitGaussian(rng, 1.0 / std::sqrt(d));
    layer.output.InitGaussian(rng, out_scale / std::sqrt(d));
    layer.ln2_gain = Parameter(prefix + "ln2_gain", 1, d);
    layer.ln2_gain.value.setOnes();
    layer.ln2_bias = Parameter(prefix + "ln2_bias", 1, d);
    layer.ffn_in = Parameter(prefix + "ffn_in", d, config.ffn_dim);
    layer.ffn_in_bias = Parameter(prefix + "ffn_in_bias", 1, config.ffn_dim);
    layer.ffn_out = Parameter(prefix + "ffn_out", config.ffn_dim, d);
    layer.ffn_out_bias = Parameter(prefix + "ffn_out_bias", 1, d);
    layer.ffn_in.InitGaussian(rng, std::sqrt(2.0 / d));
    layer.ffn_out.InitGaussian(rng, out_scale / std::sqrt(config.ffn_dim));
    layers_.push_back(std::move(layer));
  }
  final_gain_ = Parameter("encoder.final_gain", 1, d);
  final_gain_.value.setOnes();
  final_bias_ = Parameter("encoder.final_bias", 1, d);
}

std::unique_ptr<ToyEncoder> ToyEncoder::FromConfig(
    const nlohmann::json& config) {
  ToyEncoderConfig c;
  try {
    c.dim = config.at("dim").get<int>();
    c.layers = config.at("layers").get<int>();
    c.heads = config.at("heads").get<int>();
    c.ffn_dim = config.at("ffn_dim").get<int>();
    c.max_len = config.at("max_len").get<int>();
    c.min_count = config.at("min_count").get<int>();
    c.seed = config.at("seed").get<uint64_t>();
    c.attention_identity = config.value("attention_identity", 1.0);
    return std::make_unique<ToyEncoder>(
        c, SubwordVocab::FromPieces(
               config.at("vocab").get<std::vector<std::string>>()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kModel,
                std::string("bad toy encoder config: ") + e.what());
  }
}

nlohmann::json ToyEncoder::Config() const {
  return nlohmann::json{{"kind", "toy"},
                        {"dim", config_.dim},
                        {"layers", config_.layers},
                        {"heads", config_.heads},
                        {"ffn_dim", config_.ffn_dim},
                        {"max_len", config_.max_len},
                        {"min_count", config_.min_count},
                        {"attention_identity", config_.attention_identity},
                        {"seed", config_.seed},
                        {"vocab", vocab_.pieces()}};
}

ParameterList ToyEncoder::Parameters() {
  ParameterList out = {&token_embedding_, &position_embedding_,
                       &segment_embedding_};
  for (Layer& l : layers_) {
    for (Parameter* p :
         {&l.ln1_gain, &l.ln1_bias, &l.query, &l.key, &l.value, &l.output,
          &l.output_bias, &l.ln2_gain, &l.ln2_bias, &l.ffn_in, &l.ffn_in_bias,
          &l.ffn_out, &l.ffn_out_bias}) {
      out.push_back(p);
    }
  }
  out.push_back(&final_gain_);
  out.push_back(&final_bias_);
  return out;
}

Encoding ToyEncoder::Encode(std::span<const std::string> premise,
                            std::span<const std::string> hypothesis,
                            bool keep_state) const {
  std::vector<std::vector<int>> premise_ids;
  std::vector<std::vector<int>> hypothesis_ids;
  int premise_len = 0;
  int hypothesis_len = 0;
  for (const std::string& w : premise) {
    premise_ids.push_back(vocab_.Tokenize(w));
    premise_len += static_cast<int>(premise_ids.back().size());
  }
  for (const std::string& w : hypothesis) {
    hypothesis_ids.push_back(vocab_.Tokenize(w));
    hypothesis_len += static_cast<int>(hypothesis_ids.back().size());
  }
  if (hypothesis_len + 1 > config_.max_len) {
    throw Error(ErrorCode::kPrecondition,
                "hypothesis needs " + std::to_string(hypothesis_len) +
                    " subwords; max_len is " + std::to_string(config_.max_len));
  }
  Encoding enc;
  size_t first_premise_word = 0;
  while (premise_len + 1 + hypothesis_len > config_.max_len) {
    premise_len -= static_cast<int>(premise_ids[first_premise_word].size());
    ++first_premise_word;
  }
  enc.premise_words_dropped = static_cast<int>(first_premise_word);
  enc.truncated = first_premise_word > 0;

  auto state = std::make_unique<State>();
  int pos = 0;
  for (size_t w = first_premise_word; w < premise_ids.size(); ++w) {
    for (int id : premise_ids[w]) {
      state->ids.push_back(id);
      state->positions.push_back(pos++);
      state->segments.push_back(0);
    }
  }
  state->ids.push_back(SubwordVocab::kSep);
  state->positions.push_back(pos);
  state->segments.push_back(0);
  pos = 0;
  for (const std::vector<int>& ids : hypothesis_ids) {
    enc.word_rows.push_back(static_cast<int>(state->ids.size()));
    for (int id : ids) {
      state->ids.push_back(id);
      state->positions.push_back(pos++);
      state->segments.push_back(1);
    }
  }

  const int n = static_cast<int>(state->ids.size());
  const int d = config_.dim;
  const int heads = config_.heads;
  const int head_dim = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Matrix x(n, d);
  for (int i = 0; i < n; ++i) {
    x.row(i) = token_embedding_.value.row(state->ids[i]) +
               position_embedding_.value.row(state->positions[i]) +
               segment_embedding_.value.row(state->segments[i]);
  }
  state->layers.resize(layers_.size());
  for (size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    State::LayerCache& c = state->layers[l];
    c.input = x;
    c.normed1 = LayerNormForward(x, layer.ln1_gain.value, layer.ln1_bias.value,
                                 &c.ln1);
    c.query = c.normed1 * layer.query.value;
    c.key = c.normed1 * layer.key.value;
    c.value = c.normed1 * layer.value.value;
    c.attended.resize(n, d);
    c.probs.resize(heads);
    for (int h = 0; h < heads; ++h) {
      const int off = h * head_dim;
      Matrix scores = c.query.middleCols(off, head_dim) *
                      c.key.middleCols(off, head_dim).transpose() * scale;
      SoftmaxRowsInPlace(scores);
      c.attended.middleCols(off, head_dim) =
          scores * c.value.middleCols(off, head_dim);
      c.probs[h] = std::move(scores);
    }
    c.residual = x + c.attended * layer.output.value;
    c.residual.rowwise() += layer.output_bias.value.row(0);
    c.normed2 = LayerNormForward(c.residual, layer.ln2_gain.value,
                                 layer.ln2_bias.value, &c.ln2);
    c.hidden_pre = c.normed2 * layer.ffn_in.value;
    c.hidden_pre.rowwise() += layer.ffn_in_bias.value.row(0);
    c.hidden = c.hidden_pre.cwiseMax(0.0);
    x = c.residual + c.hidden * layer.ffn_out.value;
    x.rowwise() += layer.ffn_out_bias.value.row(0);
  }
  enc.sequence =
      LayerNormForward(x, final_gain_.value, final_bias_.value, &state->final_ln);
  enc.words.resize(static_cast<Eigen::Index>(enc.word_rows.size()), d);
  for (size_t w = 0; w < enc.word_rows.size(); ++w) {
    enc.words.row(static_cast<Eigen::Index>(w)) =
        enc.sequence.row(enc.word_rows[w]);
  }
  if (keep_state) enc.state = std::move(state);
  return enc;
}

void ToyEncoder::Backward(const Encoding& encoding, const Matrix& grad_words) {
  const auto* state = dynamic_cast<const State*>(encoding.state.get());
  if (state == nullptr) {
    throw Error(ErrorCode::kModel, "Backward needs a stateful encoding");
  }
  const int n = static_cast<int>(state->ids.size());
  const int d = config_.dim;
  const int heads = config_.heads;
  const int head_dim = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Matrix grad_seq = Matrix::Zero(n, d);
  for (size_t w = 0; w < encoding.word_rows.size(); ++w) {
    grad_seq.row(encoding.word_rows[w]) +=
        grad_words.row(static_cast<Eigen::Index>(w));
  }
  Matrix grad_x = LayerNormBackward(grad_seq, state->final_ln, final_gain_.value,
                                    &final_gain_.grad, &final_bias_.grad);

  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
    Layer& layer = layers_[l];
    const State::LayerCache& c = state->layers[l];
    // x_out = residual + relu(normed2 W1 + b1) W2 + b2
    layer.ffn_out_bias.grad += grad_x.colwise().sum();
    layer.ffn_out.grad += c.hidden.transpose() * grad_x;
    Matrix grad_hidden = grad_x * layer.ffn_out.value.transpose();
    grad_hidden = grad_hidden.cwiseProduct(
        (c.hidden_pre.array() > 0.0).cast<double>().matrix());
    layer.ffn_in_bias.grad += grad_hidden.colwise().sum();
    layer.ffn_in.grad += c.normed2.transpose() * grad_hidden;
    const Matrix grad_normed2 = grad_hidden * layer.ffn_in.value.transpose();
    Matrix grad_residual =
        grad_x + LayerNormBackward(grad_normed2, c.ln2, layer.ln2_gain.value,
                                   &layer.ln2_gain.grad, &layer.ln2_bias.grad);
    // residual = input + attended Wo + bo
    layer.output_bias.grad += grad_residual.colwise().sum();
    layer.output.grad += c.attended.transpose() * grad_residual;
    const Matrix grad_attended =
        grad_residual * layer.output.value.transpose();
    Matrix grad_query(n, d), grad_key(n, d), grad_value(n, d);
    for (int h = 0; h < heads; ++h) {
      const int off = h * head_dim;
      const Matrix& p = c.probs[h];
      const Matrix grad_head = grad_attended.middleCols(off, head_dim);
      grad_value.middleCols(off, head_dim) = p.transpose() * grad_head;
      const Matrix grad_p =
          grad_head * c.value.middleCols(off, head_dim).transpose();
      Matrix grad_scores = p.cwiseProduct(
          (grad_p - (grad_p.cwiseProduct(p)).rowwise().sum().replicate(1, n)));
      grad_scores *= scale;
      grad_query.middleCols(off, head_dim) =
          grad_scores * c.key.middleCols(off, head_dim);
      grad_key.middleCols(off, head_dim) =
          grad_scores.transpose() * c.query.middleCols(off, head_dim);
    }
    layer.query.grad += c.normed1.transpose() * grad_query;
    layer.key.grad += c.normed1.transpose() * grad_key;
    layer.value.grad += c.normed1.transpose() * grad_value;
    const Matrix grad_normed1 = grad_query * layer.query.value.transpose() +
                                grad_key * layer.key.value.transpose() +
                                grad_value * layer.value.value.transpose();
    grad_x = grad_residual +
             LayerNormBackward(grad_normed1, c.ln1, layer.ln1_gain.value,
                               &layer.ln1_gain.grad, &layer.ln1_bias.grad);
  }
  for (int i = 0; i < n; ++i) {
    token_embedding_.grad.row(state->ids[i]) += grad_x.row(i);
    position_embedding_.grad.row(state->positions[i]) += grad_x.row(i);
    segment_embedding_.grad.row(state->segments[i]) += grad_x.row(i);
  }
}

// ---------------------------------------------------------------------------
// External encoders

ExternalEncoder::ExternalEncoder(int dim, Callback callback,
                                 nlohmann::json config)
    : dim_(dim), callback_(std::move(callback)), config_(std::move(config)) {
  if (config_.is_null()) config_ = nlohmann::json::object();
  config_["kind"] = "external";
  config_["dim"] = dim_;
}

Encoding ExternalEncoder::Encode(std::span<const std::string> premise,
                                 std::span<const std::string> hypothesis,
                                 bool) const {
  Encoding enc;
  enc.words = callback_(premise, hypothesis);
  if (enc.words.rows() != static_cast<Eigen::Index>(hypothesis.size()) ||
      enc.words.cols() != dim_) {
    throw Error(ErrorCode::kModel,
                "external encoder returned " + std::to_string(enc.words.rows()) +
                    "x" + std::to_string(enc.words.cols()) + ", expected " +
                    std::to_string(hypothesis.size()) + "x" +
                    std::to_string(dim_));
  }
  enc.sequence = enc.words;
  for (int i = 0; i < static_cast<int>(hypothesis.size()); ++i) {
    enc.word_rows.push_back(i);
  }
  return enc;
}

std::unique_ptr<ExternalEncoder> MakeStaticVectorEncoder(
    std::shared_ptr<const WordVectors> vectors, const std::string& source) {
  const int vdim = vectors->dim();
  auto callback = [vectors, vdim](std::span<const std::string> premise,
                                  std::span<const std::string> hypothesis) {
    const WordSimilarity sim = MakeSimilarity(vectors.get());
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(hypothesis.size()),
                              vdim + 1);
    for (size_t i = 0; i < hypothesis.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      if (const std::vector<double>* v = vectors->Find(hypothesis[i])) {
        for (int k = 0; k < vdim; ++k) out(r, k) = (*v)[k];
      }
      double best = 0.0;
      for (const std::string& p : premise) best = std::max(best, sim(p, hypothesis[i]));
      out(r, vdim) = best;
    }
    return out;
  };
  return std::make_unique<ExternalEncoder>(
      vdim + 1, callback,
      nlohmann::json{{"kind", "external"},
                     {"adapter", "static_vectors"},
                     {"vectors", source}});
}

}  // namespace dae
