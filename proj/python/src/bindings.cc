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

// Python bindings. Sentences, arcs and records cross the boundary as JSON
// text in the on-disk schema; the package's Python layer converts to dicts.

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dae/augment.h"
#include "dae/autolabel.h"
#include "dae/commands.h"
#include "dae/conllu.h"
#include "dae/dataio.h"
#include "dae/depgraph.h"
#include "dae/error.h"
#include "dae/model.h"
#include "dae/scorer.h"
#include "dae/synthetic.h"
#include "json.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace dae {
namespace {

ParsedSentence Sentence(const std::string& text) {
  return SentenceFromJson(json::parse(text));
}

std::string Dump(const nlohmann::ordered_json& j) { return j.dump(); }

std::string DumpExamples(const std::vector<ArcAnnotatedExample>& examples) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const ArcAnnotatedExample& ex : examples) out.push_back(ExampleToJson(ex));
  return out.dump();
}

std::vector<ArcAnnotatedExample> LoadExamples(const std::string& text) {
  std::vector<ArcAnnotatedExample> out;
  for (const json& j : json::parse(text)) out.push_back(ExampleFromJson(j));
  return out;
}

std::string ArcsJson(const std::vector<DependencyArc>& arcs) {
  json out = json::array();
  for (const DependencyArc& a : arcs) {
    out.push_back({{"head", a.head}, {"child", a.child}, {"label", a.label}});
  }
  return out.dump();
}

py::tuple RunCliCaptured(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = RunCli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

class PyModel {
 public:
  explicit PyModel(const std::string& dir)
      : model_(std::make_unique<DaeModel>(DaeModel::Load(dir))) {}

  // [(head, child, label, p_entailed)] over the semantic arcs.
  std::vector<std::tuple<int, int, std::string, double>> PredictArcs(
      const std::string& premise, const std::string& hypothesis) const {
    const ParsedSentence p = Sentence(premise);
    const ParsedSentence h = Sentence(hypothesis);
    const std::vector<DependencyArc> arcs = FilterSemanticArcs(h);
    const std::vector<double> probs = model_->PredictArcs(p, h, arcs);
    std::vector<std::tuple<int, int, std::string, double>> out;
    for (size_t i = 0; i < arcs.size(); ++i) {
      out.emplace_back(arcs[i].head, arcs[i].child, arcs[i].label, probs[i]);
    }
    return out;
  }

  std::optional<double> SentenceScoreOf(const std::string& premise,
                                        const std::string& hypothesis,
                                        const std::string& pooling) const {
    const auto c = SentenceScore(*model_, Sentence(premise),
                                 Sentence(hypothesis), ParsePooling(pooling));
    if (!c.has_value()) return std::nullopt;
    return c->sentence_score;
  }

  std::string Report(const std::string& premise, const std::string& hypothesis,
                     const std::string& pooling) const {
    return Dump(ReportToJson(Localize(*model_, Sentence(premise),
                                      Sentence(hypothesis),
                                      ParsePooling(pooling))));
  }

  std::map<std::string, double> Evaluate(const std::string& dataset_path) const {
    const IntrinsicMetrics m =
        EvaluateIntrinsic(*model_, ReadDataset(dataset_path));
    return {{"accuracy", m.accuracy}, {"precision", m.precision},
            {"recall", m.recall},     {"f1", m.f1},
            {"arcs", static_cast<double>(m.arcs)}};
  }

  std::vector<std::string> Labels() const { return model_->labels(); }

 private:
  std::unique_ptr<DaeModel> model_;
};

}  // namespace
}  // namespace dae

PYBIND11_MODULE(_core, m) {
  using namespace dae;
  m.doc() = "Dependency arc entailment toolkit";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg =
          std::string(ErrorCategory(e.code())) + ": " + e.what();
      switch (e.code()) {
        case ErrorCode::kIo:
          PyErr_SetString(PyExc_OSError, msg.c_str());
          break;
        default:
          PyErr_SetString(PyExc_ValueError, msg.c_str());
      }
    }
  });

  m.def("run_cli", &RunCliCaptured, py::arg("args"),
        "Runs the command-line tool; returns (exit_code, stdout, stderr).");
  m.def("parse_conllu", [](const std::string& text) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const ParsedSentence& s : ParseConlluString(text)) {
      out.push_back(SentenceToJson(s));
    }
    return out.dump();
  });
  m.def("semantic_arcs", [](const std::string& sentence) {
    return ArcsJson(FilterSemanticArcs(Sentence(sentence)));
  });
  m.def("arc_key",
        [](const std::string& sentence, int head, int child,
           const std::string& label, bool use_lemma) {
          const ArcKey k = MakeArcKey(DependencyArc{head, child, label},
                                      Sentence(sentence),
                                      ArcKeyOptions{use_lemma});
          return py::make_tuple(k.head_form, k.child_form, k.label);
        },
        py::arg("sentence"), py::arg("head"), py::arg("child"),
        py::arg("label"), py::arg("use_lemma") = false);
  m.def("label_gold_pair",
        [](const std::string& source, const std::string& gold) -> std::optional<std::string> {
          auto ex = LabelGoldPair({Sentence(source), Sentence(gold)});
          if (!ex.has_value()) return std::nullopt;
          return Dump(ExampleToJson(*ex));
        });
  m.def("label_beam",
        [](const std::string& record, int bottom_m, bool top_positive,
           bool use_lemma) {
          return DumpExamples(LabelBeam(BeamRecordFromJson(json::parse(record)),
                                        LabelingConfig{bottom_m, top_positive,
                                                       ArcKeyOptions{use_lemma}}));
        },
        py::arg("record"), py::arg("bottom_m") = 3,
        py::arg("include_top_positive") = true, py::arg("use_lemma") = false);
  m.def("word_swap",
        [](const std::string& sentence, int num_swaps, uint64_t seed) {
          return Dump(ExampleToJson(
              WordSwap(Sentence(sentence), SwapConfig{num_swaps, seed})));
        },
        py::arg("sentence"), py::arg("num_swaps") = 1, py::arg("seed") = 0);
  m.def("hallucinate_span",
        [](const std::string& sentence, uint64_t seed) {
          return Dump(ExampleToJson(HallucinateSpan(Sentence(sentence), seed)));
        },
        py::arg("sentence"), py::arg("seed") = 0);
  m.def("rule_based_score",
        [](const std::string& premise, const std::string& hypothesis) {
          return RuleBasedScore(Sentence(premise), Sentence(hypothesis));
        });
  m.def("pool_scores",
        [](const std::vector<double>& p, const std::string& pooling) {
          return PoolScores(p, ParsePooling(pooling));
        },
        py::arg("probabilities"), py::arg("pooling") = "mean");
  m.def("rerank_scores",
        [](const std::vector<std::pair<std::optional<double>, std::optional<double>>>& scores,
           uint64_t seed) {
          std::vector<RerankItem> items(scores.size());
          std::map<const ParsedSentence*, std::optional<double>> lookup;
          for (size_t i = 0; i < items.size(); ++i) {
            lookup[&items[i].correct] = scores[i].first;
            lookup[&items[i].incorrect] = scores[i].second;
          }
          const SentenceScorer scorer = [&lookup](const ParsedSentence&,
                                                  const ParsedSentence& c) {
            return lookup.at(&c);
          };
          const RerankResult r = Rerank(scorer, items, seed);
          return std::map<std::string, double>{
              {"accuracy", r.accuracy},
              {"items", static_cast<double>(r.items)},
              {"wins", static_cast<double>(r.wins)},
              {"losses", static_cast<double>(r.losses)},
              {"ties", static_cast<double>(r.ties)},
              {"failures", static_cast<double>(r.failures)}};
        },
        py::arg("scores"), py::arg("seed") = 0,
        "Pairwise accuracy from (correct, incorrect) scores; None marks an "
        "unscorable candidate.");
  m.def("measure_agreement",
        [](const std::string& automatic, const std::string& manual) {
          const AgreementReport r =
              MeasureAgreement(LoadExamples(automatic), LoadExamples(manual));
          return std::map<std::string, double>{
              {"agreement", r.agreement},
              {"matched", static_cast<double>(r.matched)},
              {"compared", static_cast<double>(r.compared)}};
        });
  m.def("read_dataset", [](const std::string& path) {
    return DumpExamples(ReadDataset(path));
  });
  m.def("write_dataset", [](const std::string& records, const std::string& path) {
    WriteDataset(LoadExamples(records), path);
  });
  m.def("synthetic_sentences", [](int n, uint64_t seed) {
    SyntheticCorpus corpus(seed);
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i) out.push_back(SentenceToJson(corpus.Sentence()));
    return out.dump();
  });

  py::class_<PyModel>(m, "Model")
      .def(py::init<const std::string&>(), py::arg("checkpoint"))
      .def("predict_arcs", &PyModel::PredictArcs)
      .def("sentence_score", &PyModel::SentenceScoreOf, py::arg("premise"),
           py::arg("hypothesis"), py::arg("pooling") = "mean")
      .def("report", &PyModel::Report, py::arg("premise"),
           py::arg("hypothesis"), py::arg("pooling") = "mean")
      .def("evaluate", &PyModel::Evaluate)
      .def_property_readonly("labels", &PyModel::Labels);
}
