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

#include "dae/model.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

#include "dae/error.h"
#include "dae/random.h"

namespace dae {
namespace {

constexpr char kParamsMagic[8] = {'D', 'A', 'E', 'P', 'A', 'R', 'M', '1'};
constexpr int kCheckpointVersion = 1;

// Two-class softmax from logits; returns P(entailed).
double EntailedProbability(const RowVector& logits) {
  const double m = logits.maxCoeff();
  const double e0 = std::exp(logits(0) - m);
  const double e1 = std::exp(logits(1) - m);
  return e1 / (e0 + e1);
}

double LogProbability(const RowVector& logits, int cls) {
  const double m = logits.maxCoeff();
  const double lse =
      m + std::log(std::exp(logits(0) - m) + std::exp(logits(1) - m));
  return logits(cls) - lse;
}

template <typename T>
void WritePod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::kModel, "truncated parameter file");
  return v;
}

}  // namespace

DaeModel::DaeModel(std::unique_ptr<Encoder> encoder,
                   std::vector<std::string> labels, int label_dim,
                   uint64_t seed)
    : encoder_(std::move(encoder)), label_dim_(label_dim), seed_(seed) {
  labels_.emplace_back(kUnknownLabel);
  std::set<std::string> seen;
  for (std::string& l : labels) {
    if (l == kUnknownLabel || !seen.insert(l).second) continue;
    labels_.push_back(std::move(l));
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    label_index_[labels_[i]] = static_cast<int>(i);
  }
  const int d = encoder_->dim();
  Rng rng(SplitSeed(seed, "head"));
  label_embedding_ = Parameter("label_embedding",
                               static_cast<int>(labels_.size()), label_dim);
  label_embedding_.InitGaussian(rng, 1.0);
  root_vector_ = Parameter("root_vector", 1, d);
  root_vector_.InitGaussian(rng, 1.0);
  head_weight_ = Parameter("head_weight", input_dim(), 2);
  head_weight_.InitGaussian(rng, 1.0 / std::sqrt(input_dim()));
  head_bias_ = Parameter("head_bias", 1, 2);
}

DaeModel DaeModel::CreateToy(std::span<const ArcAnnotatedExample> examples,
                             const ModelConfig& config) {
  std::vector<std::string> words;
  std::set<std::string> labels;
  for (const ArcAnnotatedExample& ex : examples) {
    for (const Token& t : ex.premise.tokens) words.push_back(t.form);
    for (const Token& t : ex.hypothesis.tokens) words.push_back(t.form);
    for (const DependencyArc& arc : FilterSemanticArcs(ex.hypothesis)) {
      labels.insert(arc.label);
    }
  }
  ToyEncoderConfig enc = config.encoder;
  enc.seed = SplitSeed(config.seed, "encoder");
  auto encoder = std::make_unique<ToyEncoder>(
      enc, SubwordVocab::Build(words, enc.min_count));
  return DaeModel(std::move(encoder),
                  std::vector<std::string>(labels.begin(), labels.end()),
                  config.label_dim, config.seed);
}

int DaeModel::LabelId(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  return it == label_index_.end() ? 0 : it->second;
}

std::vector<std::string> DaeModel::Words(const ParsedSentence& s) const {
  std::vector<std::string> words;
  words.reserve(s.tokens.size());
  for (const Token& t : s.tokens) words.push_back(t.form);
  return words;
}

void DaeModel::CheckArc(const DependencyArc& arc, int num_words) const {
  if (arc.child < 1 || arc.child > num_words || arc.head < 0 ||
      arc.head > num_words) {
    throw Error(ErrorCode::kStructural,
                "arc " + arc.label + "(" + std::to_string(arc.head) + "->" +
                    std::to_string(arc.child) + ") outside " +
                    std::to_string(num_words) + " encoded words");
  }
}

RowVector DaeModel::ArcRepresentation(const Matrix& words,
                                      const DependencyArc& arc) const {
  CheckArc(arc, static_cast<int>(words.rows()));
  const int d = encoder_->dim();
  RowVector r(input_dim());
  r.segment(0, d) =
      arc.head == 0 ? RowVector(root_vector_.value.row(0))
                    : RowVector(words.row(arc.head - 1));
  r.segment(d, d) = words.row(arc.child - 1);
  r.segment(2 * d, label_dim_) = label_embedding_.value.row(LabelId(arc.label));
  return r;
}

std::vector<ArcPrediction> DaeModel::PredictArcsDetailed(
    const ParsedSentence& premise, const ParsedSentence& hypothesis,
    std::span<const DependencyArc> arcs) const {
  const std::vector<std::string> p = Words(premise);
  const std::vector<std::string> h = Words(hypothesis);
  const Encoding enc = encoder_->Encode(p, h, /*keep_state=*/false);
  std::vector<ArcPrediction> out;
  out.reserve(arcs.size());
  for (const DependencyArc& arc : arcs) {
    const RowVector logits =
        ArcRepresentation(enc.words, arc) * head_weight_.value +
        head_bias_.value;
    out.push_back(ArcPrediction{EntailedProbability(logits), enc.truncated});
  }
  return out;
}

std::vector<double> DaeModel::PredictArcs(
    const ParsedSentence& premise, const ParsedSentence& hypothesis,
    std::span<const DependencyArc> arcs) const {
  std::vector<double> out;
  for (const ArcPrediction& p : PredictArcsDetailed(premise, hypothesis, arcs)) {
    out.push_back(p.p_entailed);
  }
  return out;
}

ArcPrediction DaeModel::PredictArc(const ParsedSentence& premise,
                                   const ParsedSentence& hypothesis,
                                   const DependencyArc& arc) const {
  return PredictArcsDetailed(premise, hypothesis,
                             std::span<const DependencyArc>(&arc, 1))
      .front();
}

double MaskedCrossEntropy(std::span<const ArcAnnotation> annotations,
                          std::span<const double> p_entailed,
                          const std::array<double, 2>& class_weights) {
  if (annotations.size() != p_entailed.size()) {
    throw Error(ErrorCode::kPrecondition,
                "one probability per annotation is required");
  }
  double loss = 0.0;
  for (size_t i = 0; i < annotations.size(); ++i) {
    if (!annotations[i].gold.has_value()) continue;
    const int cls = static_cast<int>(*annotations[i].gold);
    const double p = cls == 1 ? p_entailed[i] : 1.0 - p_entailed[i];
    loss -= class_weights[cls] * std::log(p);
  }
  return loss;
}

double DaeModel::DatasetLoss(std::span<const ArcAnnotatedExample> examples,
                             const TrainConfig& config) const {
  double loss = 0.0;
  for (const ArcAnnotatedExample& ex : examples) {
    std::vector<DependencyArc> arcs;
    for (const ArcAnnotation& a : ex.annotations) arcs.push_back(a.arc);
    const std::vector<double> p = PredictArcs(ex.premise, ex.hypothesis, arcs);
    loss += MaskedCrossEntropy(ex.annotations, p, config.class_weights);
  }
  return loss;
}

double DaeModel::AccumulateGradients(
    std::span<const ArcAnnotatedExample> examples, const TrainConfig& config,
    double scale, int64_t* correct) {
  std::vector<const ArcAnnotatedExample*> ptrs;
  for (const ArcAnnotatedExample& ex : examples) ptrs.push_back(&ex);
  return AccumulateGradients(ptrs, config, scale, correct);
}

double DaeModel::AccumulateGradients(
    std::span<const ArcAnnotatedExample* const> examples,
    const TrainConfig& config, double scale, int64_t* correct) {
  const int d = encoder_->dim();
  double loss = 0.0;
  for (const ArcAnnotatedExample* ex : examples) {
    if (ex->NumLabeled() == 0) continue;
    const std::vector<std::string> p = Words(ex->premise);
    const std::vector<std::string> h = Words(ex->hypothesis);
    const Encoding enc = encoder_->Encode(p, h, /*keep_state=*/true);
    Matrix grad_words = Matrix::Zero(enc.words.rows(), enc.words.cols());
    for (const ArcAnnotation& a : ex->annotations) {
      if (!a.gold.has_value()) continue;
      const int cls = static_cast<int>(*a.gold);
      const double w = config.class_weights[cls];
      const RowVector r = ArcRepresentation(enc.words, a.arc);
      const RowVector logits = r * head_weight_.value + head_bias_.value;
      loss -= w * LogProbability(logits, cls);
      const double p1 = EntailedProbability(logits);
      if (correct != nullptr && ((p1 >= 0.5) == (cls == 1))) ++*correct;
      RowVector grad_logits(2);
      grad_logits << 1.0 - p1, p1;
      grad_logits(cls) -= 1.0;
      grad_logits *= w * scale;
      head_weight_.grad += r.transpose() * grad_logits;
      head_bias_.grad += grad_logits;
      const RowVector grad_r = grad_logits * head_weight_.value.transpose();
      if (a.arc.head == 0) {
        root_vector_.grad.row(0) += grad_r.segment(0, d);
      } else {
        grad_words.row(a.arc.head - 1) += grad_r.segment(0, d);
      }
      grad_words.row(a.arc.child - 1) += grad_r.segment(d, d);
      label_embedding_.grad.row(LabelId(a.arc.label)) +=
          grad_r.segment(2 * d, label_dim_);
    }
    encoder_->Backward(enc, grad_words);
  }
  return loss;
}

ParameterList DaeModel::HeadParameters() {
  return {&label_embedding_, &root_vector_, &head_weight_, &head_bias_};
}

ParameterList DaeModel::Parameters() {
  ParameterList out = encoder_->Parameters();
  for (Parameter* p : HeadParameters()) out.push_back(p);
  return out;
}

ParameterList DaeModel::AllParameters() const {
  return const_cast<DaeModel*>(this)->Parameters();
}

nlohmann::json DaeModel::ReadMetadata(const std::string& dir) {
  const std::filesystem::path path = std::filesystem::path(dir) / "metadata.json";
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kModel, path.string() + ": " + e.what());
  }
}

void DaeModel::Save(const std::string& dir, const nlohmann::json& extra) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir);
  const ParameterList params = AllParameters();

  nlohmann::json meta;
  meta["format"] = "dae-checkpoint";
  meta["version"] = kCheckpointVersion;
  meta["encoder"] = encoder_->Config();
  meta["encoder_dim"] = encoder_->dim();
  meta["label_dim"] = label_dim_;
  meta["labels"] = std::vector<std::string>(labels_.begin() + 1, labels_.end());
  meta["seed"] = seed_;
  nlohmann::json shapes = nlohmann::json::array();
  for (const Parameter* p : params) {
    shapes.push_back({{"name", p->name},
                      {"rows", p->value.rows()},
                      {"cols", p->value.cols()}});
  }
  meta["parameters"] = shapes;
  if (!extra.is_null()) meta["run"] = extra;
  {
    std::ofstream out(std::filesystem::path(dir) / "metadata.json");
    if (!out) throw Error(ErrorCode::kIo, "cannot write metadata in " + dir);
    out << meta.dump(2) << '\n';
  }
  std::ofstream out(std::filesystem::path(dir) / "params.bin",
                    std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write params in " + dir);
  out.write(kParamsMagic, sizeof(kParamsMagic));
  WritePod<uint32_t>(out, static_cast<uint32_t>(params.size()));
  for (const Parameter* p : params) {
    WritePod<uint32_t>(out, static_cast<uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    WritePod<int64_t>(out, p->value.rows());
    WritePod<int64_t>(out, p->value.cols());
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed in " + dir);
}

DaeModel DaeModel::Load(const std::string& dir,
                        const EncoderFactory& factory) {
  const nlohmann::json meta = ReadMetadata(dir);
  std::unique_ptr<Encoder> encoder;
  std::vector<std::string> labels;
  int label_dim = 0;
  uint64_t seed = 0;
  try {
    if (meta.at("format") != "dae-checkpoint" ||
        meta.at("version") != kCheckpointVersion) {
      throw Error(ErrorCode::kModel, dir + " is not a supported checkpoint");
    }
    const nlohmann::json& enc = meta.at("encoder");
    if (enc.value("kind", "") == "toy") {
      encoder = ToyEncoder::FromConfig(enc);
    } else if (factory) {
      encoder = factory(enc);
    } else {
      throw Error(ErrorCode::kModel,
                  "checkpoint needs an encoder factory for kind " +
                      enc.value("kind", std::string("?")));
    }
    labels = meta.at("labels").get<std::vector<std::string>>();
    label_dim = meta.at("label_dim").get<int>();
    seed = meta.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kModel, dir + ": bad metadata: " + e.what());
  }
  if (encoder == nullptr) {
    throw Error(ErrorCode::kModel, "encoder factory returned null");
  }
  DaeModel model(std::move(encoder), std::move(labels), label_dim, seed);

  const std::filesystem::path path = std::filesystem::path(dir) / "params.bin";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[sizeof(kParamsMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kParamsMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kModel, path.string() + ": bad magic");
  }
  const ParameterList params = model.Parameters();
  const auto count = ReadPod<uint32_t>(in);
  if (count != params.size()) {
    throw Error(ErrorCode::kModel, "parameter count mismatch in " + dir);
  }
  for (Parameter* p : params) {
    const auto name_len = ReadPod<uint32_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto rows = ReadPod<int64_t>(in);
    const auto cols = ReadPod<int64_t>(in);
    if (!in || name != p->name || rows != p->value.rows() ||
        cols != p->value.cols()) {
      throw Error(ErrorCode::kModel, "parameter '" + name +
                                         "' does not match the model (" +
                                         p->name + ")");
    }
    in.read(reinterpret_cast<char*>(p->value.data()),
            static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    if (!in) throw Error(ErrorCode::kModel, "truncated parameter file");
  }
  return model;
}

TrainResult Train(DaeModel& model, std::span<const ArcAnnotatedExample> train,
                  std::span<const ArcAnnotatedExample> dev,
                  const TrainConfig& config,
                  const std::function<void(const EpochMetrics&)>& on_epoch) {
  if (config.batch_size < 1 || config.epochs < 1 ||
      config.learning_rate <= 0) {
    throw Error(ErrorCode::kPrecondition,
                "batch size, epochs and learning rate must be positive");
  }
  TrainResult result;
  std::vector<const ArcAnnotatedExample*> usable;
  for (const ArcAnnotatedExample& ex : train) {
    if (ex.NumLabeled() > 0) {
      usable.push_back(&ex);
    } else {
      ++result.skipped_examples;
    }
  }
  if (usable.empty()) {
    throw Error(ErrorCode::kPrecondition, "training data has no labeled arc");
  }
  const int batches_per_epoch =
      (static_cast<int>(usable.size()) + config.batch_size - 1) /
      config.batch_size;

  ParameterList params = model.Parameters();
  AdamOptimizer::Options opt;
  opt.learning_rate = config.learning_rate;
  opt.beta1 = config.beta1;
  opt.beta2 = config.beta2;
  opt.epsilon = config.epsilon;
  opt.weight_decay = config.weight_decay;
  opt.max_grad_norm = config.max_grad_norm;
  opt.warmup_steps = config.warmup_steps;
  opt.total_steps = batches_per_epoch * config.epochs;
  AdamOptimizer optimizer(params, opt);

  Rng rng(SplitSeed(config.seed, "train"));
  std::optional<double> best_dev;
  std::vector<Matrix> best_values;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Shuffle(usable, rng);
    double epoch_loss = 0.0;
    int64_t epoch_arcs = 0;
    int64_t epoch_correct = 0;
    for (int b = 0; b < batches_per_epoch; ++b) {
      const size_t begin = static_cast<size_t>(b) * config.batch_size;
      const size_t end =
          std::min(usable.size(), begin + static_cast<size_t>(config.batch_size));
      std::span<const ArcAnnotatedExample* const> batch(usable.data() + begin,
                                                        end - begin);
      int64_t labeled = 0;
      for (const ArcAnnotatedExample* ex : batch) labeled += ex->NumLabeled();
      ZeroGrads(params);
      const double loss = model.AccumulateGradients(
          batch, config, 1.0 / static_cast<double>(labeled), &epoch_correct);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kModel,
                    "non-finite loss at epoch " + std::to_string(epoch) +
                        ", batch " + std::to_string(b + 1) +
                        " (learning rate " +
                        std::to_string(optimizer.CurrentLearningRate()) +
                        ", gradient norm " + std::to_string(GradNorm(params)) +
                        ")");
      }
      optimizer.Step();
      epoch_loss += loss;
      epoch_arcs += labeled;
    }
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = epoch_loss / static_cast<double>(epoch_arcs);
    m.train_accuracy =
        static_cast<double>(epoch_correct) / static_cast<double>(epoch_arcs);
    if (!dev.empty()) {
      m.dev_accuracy = EvaluateIntrinsic(model, dev).accuracy;
      if (!best_dev.has_value() || *m.dev_accuracy > *best_dev) {
        best_dev = m.dev_accuracy;
        result.best_epoch = epoch;
        best_values.clear();
        for (const Parameter* p : params) best_values.push_back(p->value);
      }
    } else {
      result.best_epoch = epoch;
    }
    result.epochs.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  if (!best_values.empty()) {
    for (size_t i = 0; i < params.size(); ++i) params[i]->value = best_values[i];
  }
  return result;
}

IntrinsicMetrics MetricsFromPredictions(std::span<const bool> gold_entailed,
                                        std::span<const bool> predicted) {
  if (gold_entailed.size() != predicted.size()) {
    throw Error(ErrorCode::kPrecondition, "prediction count mismatch");
  }
  if (gold_entailed.empty()) {
    throw Error(ErrorCode::kMetric, "no labeled arcs to evaluate");
  }
  IntrinsicMetrics m;
  for (size_t i = 0; i < gold_entailed.size(); ++i) {
    if (gold_entailed[i] && predicted[i]) ++m.true_positive;
    if (!gold_entailed[i] && predicted[i]) ++m.false_positive;
    if (!gold_entailed[i] && !predicted[i]) ++m.true_negative;
    if (gold_entailed[i] && !predicted[i]) ++m.false_negative;
  }
  m.arcs = static_cast<int64_t>(gold_entailed.size());
  m.accuracy = static_cast<double>(m.true_positive + m.true_negative) /
               static_cast<double>(m.arcs);
  const int64_t pred_pos = m.true_positive + m.false_positive;
  const int64_t gold_pos = m.true_positive + m.false_negative;
  m.precision = pred_pos == 0 ? 0.0
                              : static_cast<double>(m.true_positive) /
                                    static_cast<double>(pred_pos);
  m.recall = gold_pos == 0 ? 0.0
                           : static_cast<double>(m.true_positive) /
                                 static_cast<double>(gold_pos);
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

IntrinsicMetrics EvaluateIntrinsic(const ArcEntailmentModel& model,
                                   std::span<const ArcAnnotatedExample> data) {
  std::vector<bool> gold;
  std::vector<bool> predicted;
  for (const ArcAnnotatedExample& ex : data) {
    std::vector<DependencyArc> arcs;
    for (const ArcAnnotation& a : ex.annotations) {
      if (!a.gold.has_value()) continue;
      arcs.push_back(a.arc);
      gold.push_back(*a.gold == Entailment::kEntailed);
    }
    if (arcs.empty()) continue;
    for (double p : model.PredictArcs(ex.premise, ex.hypothesis, arcs)) {
      predicted.push_back(p >= 0.5);
    }
  }
  // std::vector<bool> has no contiguous storage; copy into plain arrays.
  std::unique_ptr<bool[]> g(new bool[gold.size()]);
  std::unique_ptr<bool[]> p(new bool[predicted.size()]);
  std::copy(gold.begin(), gold.end(), g.get());
  std::copy(predicted.begin(), predicted.end(), p.get());
  return MetricsFromPredictions(std::span<const bool>(g.get(), gold.size()),
                                std::span<const bool>(p.get(), predicted.size()));
}

}  // namespace dae
