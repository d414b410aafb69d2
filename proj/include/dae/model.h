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

// Dependency arc entailment classifier.
//
// Each arc of the hypothesis is represented as
//
//   r = [enc(head word); enc(child word); label_embedding(label)]
//
// and classified by a linear layer plus softmax into {non-entailed,
// entailed}. Arcs headed by ROOT use a learned vector in place of the head
// word encoding. Training minimizes cross entropy over labeled arcs only;
// unlabeled arcs contribute neither loss nor gradient.

#ifndef DAE_MODEL_H_
#define DAE_MODEL_H_

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dae/dataio.h"
#include "dae/encoder.h"

namespace dae {

// Anything that assigns P(entailed) to hypothesis arcs given a premise.
class ArcEntailmentModel {
 public:
  virtual ~ArcEntailmentModel() = default;
  virtual std::vector<double> PredictArcs(
      const ParsedSentence& premise, const ParsedSentence& hypothesis,
      std::span<const DependencyArc> arcs) const = 0;
};

struct ArcPrediction {
  double p_entailed = 0.0;
  // The premise was cut from the left to fit max_len.
  bool truncated = false;
};

struct TrainConfig {
  double learning_rate = 1e-5;
  int batch_size = 32;
  int epochs = 3;
  double max_grad_norm = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int warmup_steps = 0;
  double weight_decay = 0.0;
  uint64_t seed = 0;
  // Per-class loss weights, indexed by Entailment value.
  std::array<double, 2> class_weights = {1.0, 1.0};
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;  // mean per labeled arc
  double train_accuracy = 0.0;
  std::optional<double> dev_accuracy;
};

struct TrainResult {
  std::vector<EpochMetrics> epochs;
  int best_epoch = 0;  // 1-based; the parameters of this epoch are kept
  int skipped_examples = 0;
};

struct ModelConfig {
  ToyEncoderConfig encoder;
  int label_dim = 16;
  uint64_t seed = 0;
};

class DaeModel : public ArcEntailmentModel {
 public:
  static constexpr std::string_view kUnknownLabel = "<unk>";

  // `labels` is the label vocabulary without the reserved <unk> entry.
  DaeModel(std::unique_ptr<Encoder> encoder, std::vector<std::string> labels,
           int label_dim, uint64_t seed);

  // Toy encoder with subword and label vocabularies built from `examples`.
  static DaeModel CreateToy(std::span<const ArcAnnotatedExample> examples,
                            const ModelConfig& config);

  std::vector<double> PredictArcs(
      const ParsedSentence& premise, const ParsedSentence& hypothesis,
      std::span<const DependencyArc> arcs) const override;
  std::vector<ArcPrediction> PredictArcsDetailed(
      const ParsedSentence& premise, const ParsedSentence& hypothesis,
      std::span<const DependencyArc> arcs) const;
  ArcPrediction PredictArc(const ParsedSentence& premise,
                           const ParsedSentence& hypothesis,
                           const DependencyArc& arc) const;

  // [words(head); words(child); label embedding]. Throws Error(kStructural)
  // if an index is past the encoded words.
  RowVector ArcRepresentation(const Matrix& words,
                              const DependencyArc& arc) const;
  int LabelId(std::string_view label) const;

  // Sum over labeled arcs of -w_y log p(y). Unlabeled arcs are skipped.
  double DatasetLoss(std::span<const ArcAnnotatedExample> examples,
                     const TrainConfig& config = {}) const;
  // DatasetLoss plus accumulation of `scale` times its gradient into the
  // parameters' grad buffers (which are not cleared first). Optionally
  // counts correct predictions on labeled arcs.
  double AccumulateGradients(std::span<const ArcAnnotatedExample> examples,
                             const TrainConfig& config = {},
                             double scale = 1.0, int64_t* correct = nullptr);
  double AccumulateGradients(
      std::span<const ArcAnnotatedExample* const> examples,
      const TrainConfig& config, double scale, int64_t* correct = nullptr);

  ParameterList Parameters();
  ParameterList HeadParameters();

  Encoder& encoder() { return *encoder_; }
  const Encoder& encoder() const { return *encoder_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int label_dim() const { return label_dim_; }
  int input_dim() const { return 2 * encoder_->dim() + label_dim_; }
  Parameter& head_weight() { return head_weight_; }
  Parameter& head_bias() { return head_bias_; }

  // Writes metadata.json and params.bin into `dir` (created if missing).
  void Save(const std::string& dir, const nlohmann::json& extra = {}) const;

  using EncoderFactory =
      std::function<std::unique_ptr<Encoder>(const nlohmann::json& config)>;
  // Rebuilds toy encoders from metadata; other kinds need `factory`.
  static DaeModel Load(const std::string& dir,
                       const EncoderFactory& factory = nullptr);
  static nlohmann::json ReadMetadata(const std::string& dir);

 private:
  ParameterList AllParameters() const;
  std::vector<std::string> Words(const ParsedSentence& s) const;
  void CheckArc(const DependencyArc& arc, int num_words) const;

  std::unique_ptr<Encoder> encoder_;
  std::vector<std::string> labels_;  // labels_[0] == kUnknownLabel
  std::unordered_map<std::string, int> label_index_;
  int label_dim_;
  uint64_t seed_;
  Parameter label_embedding_;
  Parameter root_vector_;
  Parameter head_weight_;  // input_dim x 2
  Parameter head_bias_;    // 1 x 2
};

// -log p(gold) summed over labeled annotations, given P(entailed) for every
// annotation in order. Entries for unlabeled annotations are never read.
double MaskedCrossEntropy(std::span<const ArcAnnotation> annotations,
                          std::span<const double> p_entailed,
                          const std::array<double, 2>& class_weights = {1.0,
                                                                        1.0});

// Trains in place. Selects the epoch with the best dev accuracy (earliest on
// ties) when `dev` is non-empty, otherwise keeps the last epoch. Examples
// without labeled arcs are skipped. Throws Error(kModel) on a non-finite
// loss and Error(kPrecondition) when nothing is labeled.
TrainResult Train(DaeModel& model, std::span<const ArcAnnotatedExample> train,
                  std::span<const ArcAnnotatedExample> dev,
                  const TrainConfig& config,
                  const std::function<void(const EpochMetrics&)>& on_epoch =
                      nullptr);

struct IntrinsicMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;  // positive class = entailed
  int64_t arcs = 0;
  int64_t true_positive = 0;
  int64_t false_positive = 0;
  int64_t true_negative = 0;
  int64_t false_negative = 0;
};

// Arc is predicted entailed when P(entailed) >= 0.5. Throws Error(kMetric)
// when no labeled arc exists.
IntrinsicMetrics EvaluateIntrinsic(const ArcEntailmentModel& model,
                                   std::span<const ArcAnnotatedExample> data);
IntrinsicMetrics MetricsFromPredictions(std::span<const bool> gold_entailed,
                                        std::span<const bool> predicted);

}  // namespace dae

#endif  // DAE_MODEL_H_
