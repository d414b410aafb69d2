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

#include "dae/commands.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <utility>

#include "CLI11.hpp"
#include "dae/augment.h"
#include "dae/autolabel.h"
#include "dae/conllu.h"
#include "dae/dataio.h"
#include "dae/error.h"
#include "dae/model.h"
#include "dae/random.h"
#include "dae/scorer.h"
#include "dae/synthetic.h"

namespace dae {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// Prints key=value lines and mirrors them into a JSON object.
class Metrics {
 public:
  explicit Metrics(std::ostream& out) : out_(out) {}

  void Add(const std::string& key, double value) {
    out_ << key << '=' << FormatNumber(value) << '\n';
    values_[key] = value;
  }
  void Add(const std::string& key, int64_t value) {
    out_ << key << '=' << value << '\n';
    values_[key] = value;
  }
  void Add(const std::string& key, const std::string& value) {
    out_ << key << '=' << value << '\n';
    values_[key] = value;
  }
  const ordered_json& json() const { return values_; }

 private:
  std::ostream& out_;
  ordered_json values_ = ordered_json::object();
};

void CheckOutputPath(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw Error(ErrorCode::kIo,
                "output directory does not exist: " + parent.string());
  }
}

void WriteJsonFile(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

ordered_json RunRecord(const std::string& command, uint64_t seed,
                       ordered_json config, const Metrics& metrics) {
  ordered_json j;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = std::move(config);
  j["metrics"] = metrics.json();
  return j;
}

void WriteMeta(const std::string& out_path, const std::string& command,
               uint64_t seed, ordered_json config, const Metrics& metrics) {
  WriteJsonFile(out_path + ".meta.json",
                RunRecord(command, seed, std::move(config), metrics));
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// CoNLL-U by extension, otherwise JSON lines holding sentence objects or
// paraphrase pairs (whose sources are taken).
std::vector<ParsedSentence> ReadSentences(const std::string& path) {
  if (EndsWith(path, ".conllu") || EndsWith(path, ".conll")) {
    return ReadConllu(path);
  }
  std::vector<ParsedSentence> out;
  ForEachJsonLine(path, [&](const json& j, int) {
    out.push_back(j.contains("source") ? SentenceFromJson(j.at("source"))
                                       : SentenceFromJson(j));
  });
  return out;
}

struct SentencePair {
  ParsedSentence premise;
  ParsedSentence hypothesis;
};

// Any JSON-lines file whose records carry `premise` and `hypothesis`.
std::vector<SentencePair> ReadSentencePairs(const std::string& path) {
  std::vector<SentencePair> out;
  ForEachJsonLine(path, [&](const json& j, int) {
    if (!j.is_object() || !j.contains("premise") || !j.contains("hypothesis")) {
      throw Error(ErrorCode::kSchema, "record needs premise and hypothesis");
    }
    out.push_back(SentencePair{SentenceFromJson(j.at("premise")),
                               SentenceFromJson(j.at("hypothesis"))});
  });
  return out;
}

DaeModel LoadModel(const std::string& dir) {
  return DaeModel::Load(dir, [](const json& config) {
    if (config.value("adapter", "") != "static_vectors") {
      throw Error(ErrorCode::kModel,
                  "unsupported external encoder: " + config.dump());
    }
    const std::string path = config.at("vectors").get<std::string>();
    auto vectors = std::make_shared<const WordVectors>(WordVectors::Load(path));
    return std::unique_ptr<Encoder>(MakeStaticVectorEncoder(vectors, path));
  });
}

void AddStats(Metrics& m, const DatasetStats& s) {
  m.Add("examples", s.examples);
  m.Add("entailed", s.entailed);
  m.Add("non_entailed", s.non_entailed);
  m.Add("unlabeled", s.unlabeled);
  m.Add("entailed_ratio", s.EntailedRatio());
  m.Add("entailed_ratio_all_arcs", s.EntailedRatioAllArcs());
}

void AddIntrinsic(Metrics& m, const IntrinsicMetrics& r,
                  const std::string& prefix = "") {
  m.Add(prefix + "accuracy", r.accuracy);
  m.Add(prefix + "precision", r.precision);
  m.Add(prefix + "recall", r.recall);
  m.Add(prefix + "f1", r.f1);
  m.Add(prefix + "arcs", r.arcs);
}

// Registered subcommand: its CLI11 node plus the work to run when chosen.
struct Command {
  CLI::App* app;
  std::function<void(std::ostream&, std::ostream&)> run;
};

// --------------------------------------------------------------------------

struct BuildDatasetArgs {
  std::string paraphrases;
  std::string beams;
  std::string out;
  int bottom_m = 3;
  bool no_top_positive = false;
  bool use_lemma = false;
  uint64_t seed = 0;
};

void RunBuildDataset(const BuildDatasetArgs& a, std::ostream& out,
                     std::ostream& err) {
  if (a.paraphrases.empty() && a.beams.empty()) {
    throw Error(ErrorCode::kPrecondition,
                "build-dataset needs --paraphrases and/or --beams");
  }
  CheckOutputPath(a.out);
  LabelingConfig cfg;
  cfg.bottom_m = a.bottom_m;
  cfg.include_top_positive = !a.no_top_positive;
  cfg.key_options.use_lemma = a.use_lemma;

  std::vector<ArcAnnotatedExample> examples;
  int64_t skipped = 0;
  if (!a.paraphrases.empty()) {
    const std::vector<ParaphrasePair> pairs = ReadParaphrasePairs(a.paraphrases);
    for (size_t i = 0; i < pairs.size(); ++i) {
      std::optional<ArcAnnotatedExample> ex = LabelGoldPair(pairs[i]);
      if (ex.has_value()) {
        examples.push_back(std::move(*ex));
      } else {
        ++skipped;
        err << "warning: " << a.paraphrases << ": record " << i + 1
            << ": gold paraphrase has no semantic arcs; skipped\n";
      }
    }
  }
  if (!a.beams.empty()) {
    const std::vector<BeamRecord> records = ReadBeamRecords(a.beams);
    for (size_t i = 0; i < records.size(); ++i) {
      try {
        for (ArcAnnotatedExample& ex : LabelBeam(records[i], cfg)) {
          examples.push_back(std::move(ex));
        }
      } catch (const Error& e) {
        throw Error(e.code(), a.beams + ": record " + std::to_string(i + 1) +
                                  ": " + e.what());
      }
    }
  }
  WriteDataset(examples, a.out);

  Metrics m(out);
  AddStats(m, ComputeStats(examples));
  m.Add("skipped", skipped);
  ordered_json config;
  config["paraphrases"] = a.paraphrases;
  config["beams"] = a.beams;
  config["out"] = a.out;
  config["bottom_m"] = a.bottom_m;
  config["include_top_positive"] = cfg.include_top_positive;
  config["use_lemma"] = a.use_lemma;
  WriteMeta(a.out, "build-dataset", a.seed, config, m);
}

struct SentenceDatasetArgs {
  std::string beams;
  std::string out;
  int bottom_m = 3;
  uint64_t seed = 0;
};

void RunSentenceDataset(const SentenceDatasetArgs& a, std::ostream& out,
                        std::ostream&) {
  CheckOutputPath(a.out);
  const std::vector<BeamRecord> records = ReadBeamRecords(a.beams);
  const std::vector<SentencePairExample> pairs =
      DeriveSentenceDataset(records, a.bottom_m);
  WriteSentencePairs(pairs, a.out);
  int64_t positives = 0;
  for (const SentencePairExample& p : pairs) positives += p.positive ? 1 : 0;
  Metrics m(out);
  m.Add("records", static_cast<int64_t>(records.size()));
  m.Add("positives", positives);
  m.Add("negatives", static_cast<int64_t>(pairs.size()) - positives);
  ordered_json config;
  config["beams"] = a.beams;
  config["out"] = a.out;
  config["bottom_m"] = a.bottom_m;
  WriteMeta(a.out, "sentence-dataset", a.seed, config, m);
}

struct AugmentArgs {
  std::string mode = "swap";
  std::string input;
  std::string paraphrases;
  std::string vectors;
  std::string out;
  int num_swaps = 1;
  double threshold = 0.5;
  double max_displacement = 0.1;
  uint64_t seed = 0;
};

void RunAugment(const AugmentArgs& a, std::ostream& out, std::ostream& err) {
  CheckOutputPath(a.out);
  std::vector<ArcAnnotatedExample> examples;
  int64_t skipped = 0;
  if (a.mode == "synonym") {
    if (a.paraphrases.empty()) {
      throw Error(ErrorCode::kPrecondition, "synonym mode needs --paraphrases");
    }
    const std::vector<ParaphrasePair> pairs = ReadParaphrasePairs(a.paraphrases);
    WordVectors vectors;
    if (!a.vectors.empty()) vectors = WordVectors::Load(a.vectors);
    AlignmentConfig cfg;
    cfg.similarity_threshold = a.threshold;
    cfg.max_mean_displacement = a.max_displacement;
    examples = SelectSynonymPairs(pairs, cfg, MakeSimilarity(&vectors));
    skipped = static_cast<int64_t>(pairs.size()) -
              static_cast<int64_t>(examples.size());
  } else {
    std::vector<ParsedSentence> corpus;
    if (!a.input.empty()) {
      corpus = ReadSentences(a.input);
    } else if (!a.paraphrases.empty()) {
      for (ParaphrasePair& p : ReadParaphrasePairs(a.paraphrases)) {
        corpus.push_back(std::move(p.source));
      }
    } else {
      throw Error(ErrorCode::kPrecondition,
                  a.mode + " mode needs --input or --paraphrases");
    }
    if (a.mode == "overlap") {
      examples = HallucinateOverlap(corpus);
      skipped = static_cast<int64_t>(corpus.size()) -
                static_cast<int64_t>(examples.size());
    } else if (a.mode == "swap" || a.mode == "span") {
      for (size_t i = 0; i < corpus.size(); ++i) {
        const uint64_t seed =
            SplitSeed(a.seed, "augment/" + a.mode + "/" + std::to_string(i));
        try {
          if (a.mode == "swap") {
            examples.push_back(WordSwap(corpus[i], SwapConfig{a.num_swaps, seed}));
          } else {
            examples.push_back(HallucinateSpan(corpus[i], seed));
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoOp &&
              e.code() != ErrorCode::kPrecondition) {
            throw;
          }
          ++skipped;
          err << "warning: sentence " << i + 1 << ": " << e.what() << '\n';
        }
      }
    } else {
      throw Error(ErrorCode::kPrecondition, "unknown mode " + a.mode);
    }
  }
  WriteDataset(examples, a.out);
  Metrics m(out);
  AddStats(m, ComputeStats(examples));
  m.Add("skipped", skipped);
  ordered_json config;
  config["mode"] = a.mode;
  config["input"] = a.input;
  config["paraphrases"] = a.paraphrases;
  config["vectors"] = a.vectors;
  config["out"] = a.out;
  config["num_swaps"] = a.num_swaps;
  config["similarity_threshold"] = a.threshold;
  config["max_mean_displacement"] = a.max_displacement;
  WriteMeta(a.out, "augment", a.seed, config, m);
}

struct TrainArgs {
  std::string dataset;
  std::string dev;
  std::string checkpoint;
  std::string encoder = "toy";
  std::string vectors;
  int epochs = 3;
  double lr = 1e-5;
  int batch_size = 32;
  int max_len = 128;
  int dim = 64;
  int layers = 2;
  int heads = 4;
  int ffn_dim = 128;
  double attention_identity = 1.0;
  int label_dim = 16;
  int warmup = 0;
  double weight_decay = 0.0;
  double clip = 1.0;
  uint64_t seed = 0;
};

void RunTrain(const TrainArgs& a, std::ostream& out, std::ostream&) {
  const std::vector<ArcAnnotatedExample> train = ReadDataset(a.dataset);
  std::vector<ArcAnnotatedExample> dev;
  if (!a.dev.empty()) dev = ReadDataset(a.dev);

  std::unique_ptr<DaeModel> model;
  if (a.encoder == "toy") {
    ModelConfig mc;
    mc.encoder.dim = a.dim;
    mc.encoder.layers = a.layers;
    mc.encoder.heads = a.heads;
    mc.encoder.ffn_dim = a.ffn_dim;
    mc.encoder.attention_identity = a.attention_identity;
    mc.encoder.max_len = a.max_len;
    mc.label_dim = a.label_dim;
    mc.seed = a.seed;
    model = std::make_unique<DaeModel>(DaeModel::CreateToy(train, mc));
  } else if (a.encoder == "external") {
    if (a.vectors.empty()) {
      throw Error(ErrorCode::kPrecondition,
                  "--encoder external needs --vectors");
    }
    auto vectors =
        std::make_shared<const WordVectors>(WordVectors::Load(a.vectors));
    std::set<std::string> labels;
    for (const ArcAnnotatedExample& ex : train) {
      for (const DependencyArc& arc : FilterSemanticArcs(ex.hypothesis)) {
        labels.insert(arc.label);
      }
    }
    model = std::make_unique<DaeModel>(
        MakeStaticVectorEncoder(vectors, a.vectors),
        std::vector<std::string>(labels.begin(), labels.end()), a.label_dim,
        a.seed);
  } else {
    throw Error(ErrorCode::kPrecondition, "unknown encoder " + a.encoder);
  }

  TrainConfig tc;
  tc.learning_rate = a.lr;
  tc.batch_size = a.batch_size;
  tc.epochs = a.epochs;
  tc.max_grad_norm = a.clip;
  tc.warmup_steps = a.warmup;
  tc.weight_decay = a.weight_decay;
  tc.seed = a.seed;
  const TrainResult result =
      Train(*model, train, dev, tc, [&out](const EpochMetrics& e) {
        out << "epoch=" << e.epoch << " train_loss=" << FormatNumber(e.train_loss)
            << " train_accuracy=" << FormatNumber(e.train_accuracy);
        if (e.dev_accuracy.has_value()) {
          out << " dev_accuracy=" << FormatNumber(*e.dev_accuracy);
        }
        out << '\n';
      });

  Metrics m(out);
  m.Add("best_epoch", static_cast<int64_t>(result.best_epoch));
  m.Add("skipped_examples", static_cast<int64_t>(result.skipped_examples));
  m.Add("final_train_loss", result.epochs.back().train_loss);
  if (!dev.empty()) AddIntrinsic(m, EvaluateIntrinsic(*model, dev), "dev_");

  ordered_json config;
  config["dataset"] = a.dataset;
  config["dev"] = a.dev;
  config["encoder"] = a.encoder;
  config["vectors"] = a.vectors;
  config["epochs"] = a.epochs;
  config["lr"] = a.lr;
  config["batch_size"] = a.batch_size;
  config["max_len"] = a.max_len;
  config["dim"] = a.dim;
  config["layers"] = a.layers;
  config["heads"] = a.heads;
  config["ffn_dim"] = a.ffn_dim;
  config["attention_identity"] = a.attention_identity;
  config["label_dim"] = a.label_dim;
  config["warmup"] = a.warmup;
  config["weight_decay"] = a.weight_decay;
  config["clip"] = a.clip;
  const ordered_json run = RunRecord("train", a.seed, config, m);
  model->Save(a.checkpoint, json::parse(run.dump()));
  out << "checkpoint=" << a.checkpoint << '\n';
}

struct EvaluateArgs {
  std::string dataset;
  std::string checkpoint;
  std::string baseline;
  std::string out;
  uint64_t seed = 0;
};

void RunEvaluate(const EvaluateArgs& a, std::ostream& out, std::ostream&) {
  CheckOutputPath(a.out);
  const std::vector<ArcAnnotatedExample> data = ReadDataset(a.dataset);
  IntrinsicMetrics r;
  if (!a.checkpoint.empty()) {
    r = EvaluateIntrinsic(LoadModel(a.checkpoint), data);
  } else if (a.baseline == "majority") {
    r = EvaluateIntrinsic(MajorityModel(), data);
  } else if (a.baseline == "lexical") {
    r = EvaluateIntrinsic(LexicalMatchModel(), data);
  } else {
    throw Error(ErrorCode::kPrecondition,
                "evaluate needs --checkpoint or --baseline majority|lexical");
  }
  Metrics m(out);
  AddIntrinsic(m, r);
  m.Add("true_positive", r.true_positive);
  m.Add("false_positive", r.false_positive);
  m.Add("true_negative", r.true_negative);
  m.Add("false_negative", r.false_negative);
  if (!a.out.empty()) {
    ordered_json config;
    config["dataset"] = a.dataset;
    config["checkpoint"] = a.checkpoint;
    config["baseline"] = a.baseline;
    WriteJsonFile(a.out, RunRecord("evaluate", a.seed, config, m));
  }
}

struct ScoreArgs {
  std::string checkpoint;
  std::string dataset;
  std::string out;
  std::string pooling = "mean";
  uint64_t seed = 0;
};

void RunScore(const ScoreArgs& a, std::ostream& out, std::ostream&) {
  CheckOutputPath(a.out);
  const Pooling pooling = ParsePooling(a.pooling);
  const std::vector<SentencePair> pairs = ReadSentencePairs(a.dataset);
  const DaeModel model = LoadModel(a.checkpoint);
  std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + a.out);
  int64_t scored = 0;
  int64_t unscorable = 0;
  double total = 0.0;
  for (const SentencePair& p : pairs) {
    const LocalizationReport report =
        Localize(model, p.premise, p.hypothesis, pooling);
    if (report.sentence_score.has_value()) {
      ++scored;
      total += *report.sentence_score;
    } else {
      ++unscorable;
    }
    file << ReportToJson(report).dump() << '\n';
  }
  if (!file) throw Error(ErrorCode::kIo, "write failed for " + a.out);
  Metrics m(out);
  m.Add("scored", scored);
  m.Add("unscorable", unscorable);
  if (scored > 0) m.Add("mean_score", total / static_cast<double>(scored));
  ordered_json config;
  config["checkpoint"] = a.checkpoint;
  config["dataset"] = a.dataset;
  config["out"] = a.out;
  config["pooling"] = a.pooling;
  WriteMeta(a.out, "score", a.seed, config, m);
}

struct RerankArgs {
  std::string items;
  std::string scorer = "dae";
  std::string checkpoint;
  std::string pooling = "mean";
  std::string out;
  uint64_t seed = 0;
};

void RunRerank(const RerankArgs& a, std::ostream& out, std::ostream&) {
  CheckOutputPath(a.out);
  const std::vector<RerankItem> items = ReadRerankItems(a.items);
  std::unique_ptr<DaeModel> model;
  SentenceScorer scorer;
  if (a.scorer == "dae") {
    if (a.checkpoint.empty()) {
      throw Error(ErrorCode::kPrecondition, "--scorer dae needs --checkpoint");
    }
    model = std::make_unique<DaeModel>(LoadModel(a.checkpoint));
    scorer = ModelScorer(*model, ParsePooling(a.pooling));
  } else if (a.scorer == "rule") {
    scorer = RuleBasedScorer();
  } else if (a.scorer == "oracle") {
    // Knows which candidate object is the correct one.
    std::set<const ParsedSentence*> correct;
    for (const RerankItem& item : items) correct.insert(&item.correct);
    scorer = [correct](const ParsedSentence&, const ParsedSentence& candidate)
        -> std::optional<double> {
      return correct.contains(&candidate) ? 1.0 : 0.0;
    };
  } else if (a.scorer == "constant") {
    scorer = [](const ParsedSentence&, const ParsedSentence&)
        -> std::optional<double> { return 0.5; };
  } else {
    throw Error(ErrorCode::kPrecondition, "unknown scorer " + a.scorer);
  }
  const RerankResult r =
      Rerank(scorer, items, SplitSeed(a.seed, "rerank-ties"));
  Metrics m(out);
  m.Add("accuracy", r.accuracy);
  m.Add("items", r.items);
  m.Add("wins", r.wins);
  m.Add("losses", r.losses);
  m.Add("ties", r.ties);
  m.Add("failures", r.failures);
  if (!a.out.empty()) {
    ordered_json config;
    config["items"] = a.items;
    config["scorer"] = a.scorer;
    config["checkpoint"] = a.checkpoint;
    config["pooling"] = a.pooling;
    WriteJsonFile(a.out, RunRecord("rerank", a.seed, config, m));
  }
}

struct ReportArgs {
  std::string checkpoint;
  std::string dataset;
  std::string out;
  std::string format = "text";
  std::string pooling = "mean";
  int limit = 0;
  uint64_t seed = 0;
};

void RunReport(const ReportArgs& a, std::ostream& out, std::ostream&) {
  CheckOutputPath(a.out);
  if (a.format != "text" && a.format != "json") {
    throw Error(ErrorCode::kPrecondition, "unknown format " + a.format);
  }
  const Pooling pooling = ParsePooling(a.pooling);
  const std::vector<SentencePair> pairs = ReadSentencePairs(a.dataset);
  const DaeModel model = LoadModel(a.checkpoint);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + a.out);
  }
  std::ostream& sink = a.out.empty() ? out : file;
  const size_t n = a.limit > 0 ? std::min(pairs.size(), size_t(a.limit))
                               : pairs.size();
  for (size_t i = 0; i < n; ++i) {
    const LocalizationReport report =
        Localize(model, pairs[i].premise, pairs[i].hypothesis, pooling);
    if (a.format == "json") {
      sink << ReportToJson(report).dump() << '\n';
    } else {
      if (i > 0) sink << '\n';
      WriteReportText(report, sink);
    }
  }
  if (!a.out.empty()) {
    if (!file) throw Error(ErrorCode::kIo, "write failed for " + a.out);
    Metrics m(out);
    m.Add("reports", static_cast<int64_t>(n));
    ordered_json config;
    config["checkpoint"] = a.checkpoint;
    config["dataset"] = a.dataset;
    config["format"] = a.format;
    config["pooling"] = a.pooling;
    WriteMeta(a.out, "report", a.seed, config, m);
  }
}

struct AgreementArgs {
  std::string automatic;
  std::string manual;
  std::string out;
  bool show = false;
  uint64_t seed = 0;
};

void RunAgreement(const AgreementArgs& a, std::ostream& out, std::ostream&) {
  CheckOutputPath(a.out);
  const AgreementReport r =
      MeasureAgreement(ReadDataset(a.automatic), ReadDataset(a.manual));
  Metrics m(out);
  m.Add("agreement", r.agreement);
  m.Add("matched", static_cast<int64_t>(r.matched));
  m.Add("compared", static_cast<int64_t>(r.compared));
  m.Add("false_positives", static_cast<int64_t>(r.false_positives.size()));
  m.Add("false_negatives", static_cast<int64_t>(r.false_negatives.size()));
  m.Add("only_in_auto", static_cast<int64_t>(r.only_in_auto));
  m.Add("only_in_manual", static_cast<int64_t>(r.only_in_manual));
  if (a.show) {
    for (const LabelDisagreement& d : r.false_positives) {
      out << "fp\t" << d.rendered << '\t' << d.premise << '\t' << d.hypothesis
          << '\n';
    }
    for (const LabelDisagreement& d : r.false_negatives) {
      out << "fn\t" << d.rendered << '\t' << d.premise << '\t' << d.hypothesis
          << '\n';
    }
  }
  if (!a.out.empty()) {
    ordered_json config;
    config["auto"] = a.automatic;
    config["manual"] = a.manual;
    WriteJsonFile(a.out, RunRecord("agreement", a.seed, config, m));
  }
}

struct StatsArgs {
  std::string dataset;
};

void RunStats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  const std::vector<ArcAnnotatedExample> data = ReadDataset(a.dataset);
  Metrics m(out);
  AddStats(m, ComputeStats(data));
  std::map<std::string, int64_t> by_provenance;
  for (const ArcAnnotatedExample& ex : data) {
    ++by_provenance[std::string(ProvenanceName(ex.provenance))];
  }
  for (const auto& [name, count] : by_provenance) {
    m.Add("provenance." + name, count);
  }
}

struct IngestArgs {
  std::string conllu;
  std::string mode = "sentences";
  std::string out;
  int beam_size = 5;
  uint64_t seed = 0;
};

void RunIngest(const IngestArgs& a, std::ostream& out, std::ostream&) {
  CheckOutputPath(a.out);
  const std::vector<ParsedSentence> sentences = ReadConllu(a.conllu);
  Metrics m(out);
  m.Add("sentences", static_cast<int64_t>(sentences.size()));
  if (a.mode == "sentences") {
    std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + a.out);
    for (const ParsedSentence& s : sentences) {
      file << SentenceToJson(s).dump() << '\n';
    }
    m.Add("records", static_cast<int64_t>(sentences.size()));
  } else if (a.mode == "paraphrases") {
    if (sentences.size() % 2 != 0) {
      throw Error(ErrorCode::kSchema,
                  "paraphrase ingestion needs an even number of sentences");
    }
    std::vector<ParaphrasePair> pairs;
    for (size_t i = 0; i < sentences.size(); i += 2) {
      pairs.push_back(ParaphrasePair{sentences[i], sentences[i + 1]});
    }
    WriteParaphrasePairs(pairs, a.out);
    m.Add("records", static_cast<int64_t>(pairs.size()));
  } else if (a.mode == "beams") {
    const size_t block = static_cast<size_t>(a.beam_size) + 2;
    if (a.beam_size < 1 || sentences.size() % block != 0) {
      throw Error(ErrorCode::kSchema,
                  "beam ingestion needs blocks of source, gold and " +
                      std::to_string(a.beam_size) + " candidates");
    }
    std::vector<BeamRecord> records;
    for (size_t i = 0; i < sentences.size(); i += block) {
      BeamRecord r;
      r.source = sentences[i];
      r.gold = sentences[i + 1];
      r.candidates.assign(sentences.begin() + i + 2,
                          sentences.begin() + i + block);
      records.push_back(std::move(r));
    }
    WriteBeamRecords(records, a.out);
    m.Add("records", static_cast<int64_t>(records.size()));
  } else {
    throw Error(ErrorCode::kPrecondition, "unknown mode " + a.mode);
  }
  ordered_json config;
  config["conllu"] = a.conllu;
  config["mode"] = a.mode;
  config["beam_size"] = a.beam_size;
  WriteMeta(a.out, "ingest", a.seed, config, m);
}

struct SynthArgs {
  std::string out_dir;
  int pairs = 50;
  int beams = 20;
  int beam_size = 5;
  int rerank = 50;
  int sentences = 100;
  int vectors_dim = 32;
  uint64_t seed = 0;
};

void RunSynth(const SynthArgs& a, std::ostream& out, std::ostream&) {
  if (a.beam_size < 4) {
    throw Error(ErrorCode::kPrecondition, "--beam-size must be >= 4");
  }
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + a.out_dir);
  const fs::path dir(a.out_dir);

  SyntheticCorpus corpus(a.seed);
  std::vector<ParaphrasePair> pairs;
  for (int i = 0; i < a.pairs; ++i) pairs.push_back(corpus.SynonymParaphrase());
  std::vector<BeamRecord> beams;
  for (int i = 0; i < a.beams; ++i) beams.push_back(corpus.Beam(a.beam_size));
  std::vector<RerankItem> items;
  for (int i = 0; i < a.rerank; ++i) {
    ParaphrasePair p = corpus.SynonymParaphrase();
    ParsedSentence wrong = corpus.Substitution(p.gold);
    items.push_back(RerankItem{p.source, std::move(p.gold), std::move(wrong)});
  }
  std::vector<ParsedSentence> sentences;
  for (int i = 0; i < a.sentences; ++i) sentences.push_back(corpus.Sentence());

  WriteParaphrasePairs(pairs, (dir / "paraphrases.jsonl").string());
  WriteBeamRecords(beams, (dir / "beams.jsonl").string());
  WriteRerankItems(items, (dir / "rerank.jsonl").string());
  {
    std::ofstream file(dir / "sentences.conllu", std::ios::binary);
    if (!file) throw Error(ErrorCode::kIo, "cannot write sentences.conllu");
    WriteConllu(sentences, file);
  }
  SyntheticCorpus::WriteVectors((dir / "vectors.txt").string(), a.vectors_dim,
                                a.seed);
  Metrics m(out);
  m.Add("paraphrases", static_cast<int64_t>(pairs.size()));
  m.Add("beams", static_cast<int64_t>(beams.size()));
  m.Add("rerank_items", static_cast<int64_t>(items.size()));
  m.Add("sentences", static_cast<int64_t>(sentences.size()));
  ordered_json config;
  config["out_dir"] = a.out_dir;
  config["pairs"] = a.pairs;
  config["beams"] = a.beams;
  config["beam_size"] = a.beam_size;
  config["rerank"] = a.rerank;
  config["sentences"] = a.sentences;
  config["vectors_dim"] = a.vectors_dim;
  WriteJsonFile((dir / "synth.meta.json").string(),
                RunRecord("synth", a.seed, config, m));
}

// --------------------------------------------------------------------------

struct AllArgs {
  BuildDatasetArgs build;
  SentenceDatasetArgs sentence;
  AugmentArgs augment;
  TrainArgs train;
  EvaluateArgs evaluate;
  ScoreArgs score;
  RerankArgs rerank;
  ReportArgs report;
  AgreementArgs agreement;
  StatsArgs stats;
  IngestArgs ingest;
  SynthArgs synth;
};

void AddSeed(CLI::App* app, uint64_t* seed) {
  app->add_option("--seed", *seed, "Global RNG seed")->capture_default_str();
}

std::vector<Command> Register(CLI::App& app, AllArgs& a) {
  std::vector<Command> commands;
  const auto existing = CLI::ExistingFile;

  {
    BuildDatasetArgs& x = a.build;
    CLI::App* c = app.add_subcommand(
        "build-dataset", "Label paraphrase pairs and beam records");
    c->add_option("--paraphrases", x.paraphrases, "Paraphrase pairs (JSONL)")
        ->check(existing);
    c->add_option("--beams", x.beams, "Beam records (JSONL)")->check(existing);
    c->add_option("--out", x.out, "Output dataset")->required();
    c->add_option("--bottom-m", x.bottom_m, "Bottom candidates to label")
        ->capture_default_str();
    c->add_flag("--no-top-positive", x.no_top_positive,
                "Skip 1-best positive arcs");
    c->add_flag("--use-lemma", x.use_lemma, "Match arcs on lemmas");
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunBuildDataset(x, o, e); }});
  }
  {
    SentenceDatasetArgs& x = a.sentence;
    CLI::App* c = app.add_subcommand("sentence-dataset",
                                     "Derive sentence-level pairs from beams");
    c->add_option("--beams", x.beams)->required()->check(existing);
    c->add_option("--out", x.out)->required();
    c->add_option("--bottom-m", x.bottom_m)->capture_default_str();
    AddSeed(c, &x.seed);
    commands.push_back(
        {c, [&x](auto& o, auto& e) { RunSentenceDataset(x, o, e); }});
  }
  {
    AugmentArgs& x = a.augment;
    CLI::App* c = app.add_subcommand("augment", "Generate synthetic examples");
    c->add_option("--mode", x.mode)
        ->check(CLI::IsMember({"swap", "synonym", "span", "overlap"}))
        ->capture_default_str();
    c->add_option("--input", x.input, "Sentences (.conllu or JSONL)")
        ->check(existing);
    c->add_option("--paraphrases", x.paraphrases)->check(existing);
    c->add_option("--vectors", x.vectors, "Word vectors text file")
        ->check(existing);
    c->add_option("--out", x.out)->required();
    c->add_option("--num-swaps", x.num_swaps)->capture_default_str();
    c->add_option("--threshold", x.threshold, "Alignment similarity threshold")
        ->capture_default_str();
    c->add_option("--max-displacement", x.max_displacement)
        ->capture_default_str();
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunAugment(x, o, e); }});
  }
  {
    TrainArgs& x = a.train;
    CLI::App* c = app.add_subcommand("train", "Train the arc classifier");
    c->add_option("--dataset", x.dataset)->required()->check(existing);
    c->add_option("--dev", x.dev)->check(existing);
    c->add_option("--checkpoint", x.checkpoint, "Output directory")
        ->required();
    c->add_option("--encoder", x.encoder)
        ->check(CLI::IsMember({"toy", "external"}))
        ->capture_default_str();
    c->add_option("--vectors", x.vectors)->check(existing);
    c->add_option("--epochs", x.epochs)->capture_default_str();
    c->add_option("--lr", x.lr)->capture_default_str();
    c->add_option("--batch-size", x.batch_size)->capture_default_str();
    c->add_option("--max-len", x.max_len)->capture_default_str();
    c->add_option("--dim", x.dim)->capture_default_str();
    c->add_option("--layers", x.layers)->capture_default_str();
    c->add_option("--heads", x.heads)->capture_default_str();
    c->add_option("--ffn-dim", x.ffn_dim)->capture_default_str();
    c->add_option("--attention-identity", x.attention_identity)
        ->capture_default_str();
    c->add_option("--label-dim", x.label_dim)->capture_default_str();
    c->add_option("--warmup", x.warmup)->capture_default_str();
    c->add_option("--weight-decay", x.weight_decay)->capture_default_str();
    c->add_option("--clip", x.clip)->capture_default_str();
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunTrain(x, o, e); }});
  }
  {
    EvaluateArgs& x = a.evaluate;
    CLI::App* c = app.add_subcommand("evaluate", "Arc-level accuracy and F1");
    c->add_option("--dataset", x.dataset)->required()->check(existing);
    c->add_option("--checkpoint", x.checkpoint)->check(CLI::ExistingDirectory);
    c->add_option("--baseline", x.baseline)
        ->check(CLI::IsMember({"majority", "lexical"}));
    c->add_option("--out", x.out, "Metrics file");
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunEvaluate(x, o, e); }});
  }
  {
    ScoreArgs& x = a.score;
    CLI::App* c = app.add_subcommand("score", "Score premise/hypothesis pairs");
    c->add_option("--checkpoint", x.checkpoint)
        ->required()
        ->check(CLI::ExistingDirectory);
    c->add_option("--dataset", x.dataset)->required()->check(existing);
    c->add_option("--out", x.out)->required();
    c->add_option("--pooling", x.pooling)
        ->check(CLI::IsMember({"mean", "min", "geo"}))
        ->capture_default_str();
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunScore(x, o, e); }});
  }
  {
    RerankArgs& x = a.rerank;
    CLI::App* c = app.add_subcommand("rerank", "Pairwise reranking accuracy");
    c->add_option("--items", x.items)->required()->check(existing);
    c->add_option("--scorer", x.scorer)
        ->check(CLI::IsMember({"dae", "rule", "oracle", "constant"}))
        ->capture_default_str();
    c->add_option("--checkpoint", x.checkpoint)->check(CLI::ExistingDirectory);
    c->add_option("--pooling", x.pooling)
        ->check(CLI::IsMember({"mean", "min", "geo"}))
        ->capture_default_str();
    c->add_option("--out", x.out, "Metrics file");
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunRerank(x, o, e); }});
  }
  {
    ReportArgs& x = a.report;
    CLI::App* c = app.add_subcommand("report", "Per-arc error localization");
    c->add_option("--checkpoint", x.checkpoint)
        ->required()
        ->check(CLI::ExistingDirectory);
    c->add_option("--dataset", x.dataset)->required()->check(existing);
    c->add_option("--out", x.out, "Output file (default stdout)");
    c->add_option("--format", x.format)
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    c->add_option("--pooling", x.pooling)
        ->check(CLI::IsMember({"mean", "min", "geo"}))
        ->capture_default_str();
    c->add_option("--limit", x.limit, "Report at most N pairs (0 = all)");
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunReport(x, o, e); }});
  }
  {
    AgreementArgs& x = a.agreement;
    CLI::App* c = app.add_subcommand(
        "agreement", "Agreement between automatic and manual labels");
    c->add_option("--auto", x.automatic)->required()->check(existing);
    c->add_option("--manual", x.manual)->required()->check(existing);
    c->add_option("--out", x.out, "Metrics file");
    c->add_flag("--show-disagreements", x.show);
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunAgreement(x, o, e); }});
  }
  {
    StatsArgs& x = a.stats;
    CLI::App* c = app.add_subcommand("stats", "Label statistics of a dataset");
    c->add_option("--dataset", x.dataset)->required()->check(existing);
    commands.push_back({c, [&x](auto& o, auto& e) { RunStats(x, o, e); }});
  }
  {
    IngestArgs& x = a.ingest;
    CLI::App* c = app.add_subcommand("ingest", "Convert CoNLL-U to JSONL");
    c->add_option("--conllu", x.conllu)->required()->check(existing);
    c->add_option("--mode", x.mode)
        ->check(CLI::IsMember({"sentences", "paraphrases", "beams"}))
        ->capture_default_str();
    c->add_option("--beam-size", x.beam_size)->capture_default_str();
    c->add_option("--out", x.out)->required();
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunIngest(x, o, e); }});
  }
  {
    SynthArgs& x = a.synth;
    CLI::App* c =
        app.add_subcommand("synth", "Write a small synthetic demo corpus");
    c->add_option("--out-dir", x.out_dir)->required();
    c->add_option("--pairs", x.pairs)->capture_default_str();
    c->add_option("--beams", x.beams)->capture_default_str();
    c->add_option("--beam-size", x.beam_size)->capture_default_str();
    c->add_option("--rerank", x.rerank)->capture_default_str();
    c->add_option("--sentences", x.sentences)->capture_default_str();
    c->add_option("--vectors-dim", x.vectors_dim)->capture_default_str();
    AddSeed(c, &x.seed);
    commands.push_back({c, [&x](auto& o, auto& e) { RunSynth(x, o, e); }});
  }
  return commands;
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, ec == std::errc() ? end : buf);
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Dependency arc entailment toolkit", "dae"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with defaults; flags win");
  AllArgs all;
  const std::vector<Command> commands = Register(app, all);

  std::vector<const char*> argv = {"dae"};
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  try {
    for (const Command& c : commands) {
      if (c.app->parsed()) c.run(out, err);
    }
  } catch (const Error& e) {
    err << "error[" << ErrorCategory(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error[IO]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dae
