# Copyright 2026 The DAE Factuality Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Dependency arc entailment: labeling, augmentation, scoring and reranking.

Sentences are dicts in the dataset schema::

    {"text": str, "tokens": [{"i", "form", "pos", "lemma"?}],
     "arcs": [{"head", "child", "label"}]}
"""

import json
from typing import Optional

from . import _core

__all__ = [
    "Model",
    "arc_key",
    "hallucinate_span",
    "label_beam",
    "label_gold_pair",
    "measure_agreement",
    "parse_conllu",
    "pool_scores",
    "read_dataset",
    "rerank_scores",
    "rule_based_score",
    "run_cli",
    "semantic_arcs",
    "synthetic_sentences",
    "word_swap",
    "write_dataset",
]

pool_scores = _core.pool_scores
rerank_scores = _core.rerank_scores


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def run_cli(*args: str):
    """Runs a `dae` subcommand in-process; returns (code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])


def parse_conllu(text: str) -> list:
    return json.loads(_core.parse_conllu(text))


def semantic_arcs(sentence: dict) -> list:
    return json.loads(_core.semantic_arcs(_dump(sentence)))


def arc_key(sentence: dict, arc: dict, use_lemma: bool = False) -> tuple:
    return _core.arc_key(_dump(sentence), arc["head"], arc["child"],
                         arc["label"], use_lemma)


def label_gold_pair(source: dict, gold: dict) -> Optional[dict]:
    out = _core.label_gold_pair(_dump(source), _dump(gold))
    return None if out is None else json.loads(out)


def label_beam(record: dict, bottom_m: int = 3,
               include_top_positive: bool = True,
               use_lemma: bool = False) -> list:
    return json.loads(_core.label_beam(_dump(record), bottom_m,
                                       include_top_positive, use_lemma))


def word_swap(sentence: dict, num_swaps: int = 1, seed: int = 0) -> dict:
    return json.loads(_core.word_swap(_dump(sentence), num_swaps, seed))


def hallucinate_span(sentence: dict, seed: int = 0) -> dict:
    return json.loads(_core.hallucinate_span(_dump(sentence), seed))


def rule_based_score(premise: dict, hypothesis: dict) -> Optional[float]:
    return _core.rule_based_score(_dump(premise), _dump(hypothesis))


def measure_agreement(automatic: list, manual: list) -> dict:
    return _core.measure_agreement(_dump(automatic), _dump(manual))


def read_dataset(path: str) -> list:
    return json.loads(_core.read_dataset(str(path)))


def write_dataset(records: list, path: str) -> None:
    _core.write_dataset(_dump(records), str(path))


def synthetic_sentences(n: int, seed: int = 0) -> list:
    return json.loads(_core.synthetic_sentences(n, seed))


class Model:
    """A trained checkpoint directory."""

    def __init__(self, checkpoint: str):
        self._model = _core.Model(str(checkpoint))

    @property
    def labels(self) -> list:
        return self._model.labels

    def predict_arcs(self, premise: dict, hypothesis: dict) -> list:
        """[(arc dict, P(entailed))] for the hypothesis's semantic arcs."""
        return [({"head": h, "child": c, "label": l}, p)
                for h, c, l, p in self._model.predict_arcs(_dump(premise),
                                                           _dump(hypothesis))]

    def sentence_score(self, premise: dict, hypothesis: dict,
                       pooling: str = "mean") -> Optional[float]:
        return self._model.sentence_score(_dump(premise), _dump(hypothesis),
                                          pooling)

    def report(self, premise: dict, hypothesis: dict,
               pooling: str = "mean") -> dict:
        return json.loads(self._model.report(_dump(premise), _dump(hypothesis),
                                             pooling))

    def evaluate(self, dataset_path: str) -> dict:
        return self._model.evaluate(str(dataset_path))
