"""Truth-value prediction, loss, and parameter search for sentence circuits.

``SentenceEvaluator`` turns token sequences into probabilities: the
squared sentence amplitude in scalar mode, or the conditional probability
of reading 1 on the sentence wire in connector mode.  Training minimizes
the mean squared error between probability and binary label, either with
SPSA or with plain random search.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ansatz import AnsatzConfig, ParamLayout, word_state_tensor
from .errors import VocabularyMiss
from .pregroup import ReductionDiagram, Vocabulary, reduce as reduce_sentence

Item = tuple[tuple[str, ...], int]


@dataclass
class LabeledDataset:
    """Token sequences with binary labels and a train/test assignment."""

    items: list[Item]
    split: list[str] = field(default_factory=list)
    seed: int = 0

    def __post_init__(self):
        if not self.split:
            self.split = ["train"] * len(self.items)
        if len(self.split) != len(self.items):
            raise ValueError("split assignment must cover every item")
        if any(label not in (0, 1) for _, label in self.items):
            raise ValueError("labels must be 0 or 1")

    def __len__(self) -> int:
        return len(self.items)

    def subset(self, part: str) -> list[Item]:
        return [item for item, s in zip(self.items, self.split) if s == part]

    @property
    def train_items(self) -> list[Item]:
        return self.subset("train")

    @property
    def test_items(self) -> list[Item]:
        return self.subset("test")

    def with_split(self, train_fraction: float, seed: int) -> "LabeledDataset":
        """Random train/test split; at least one item stays in train."""
        rng = np.random.default_rng(seed)
        order = rng.permutation(len(self.items))
        n_train = max(1, round(train_fraction * len(self.items)))
        train_idx = set(order[:n_train].tolist())
        split = ["train" if i in train_idx else "test" for i in range(len(self.items))]
        return LabeledDataset(list(self.items), split, seed)

    @staticmethod
    def from_lines(lines: Iterable[str], vocabulary: Vocabulary, seed: int = 0) -> "LabeledDataset":
        items: list[Item] = []
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            sentence, _, label = line.rpartition("\t")
            if not sentence:
                sentence, _, label = line.rpartition(" ")
            items.append((tuple(vocabulary.tokenize(sentence)), int(label)))
        return LabeledDataset(items, seed=seed)

    @staticmethod
    def load(path, vocabulary: Vocabulary, seed: int = 0) -> "LabeledDataset":
        with open(path, encoding="utf-8") as fh:
            return LabeledDataset.from_lines(fh, vocabulary, seed)

    def to_lines(self) -> list[str]:
        return [f"{' '.join(tokens)}\t{label}" for tokens, label in self.items]


class SentenceEvaluator:
    """Caches reductions and contraction plans; predicts truth probabilities.

    Word fragment states are computed once per parameter vector and shared
    across all sentences of a batch, and each sentence keeps its einsum
    contraction path, so repeated loss evaluations stay cheap inside
    optimizer loops.
    """

    def __init__(self, vocabulary: Vocabulary, config: AnsatzConfig):
        self.vocabulary = vocabulary
        self.config = config
        self.layout = ParamLayout(vocabulary, config)
        self.zero_probability_events = 0
        self._diagrams: dict[tuple[str, ...], ReductionDiagram] = {}
        self._plans: dict[tuple[str, ...], tuple] = {}

    @property
    def n_params(self) -> int:
        return len(self.layout)

    def diagram(self, tokens: Sequence[str]) -> ReductionDiagram:
        key = tuple(tokens)
        if key not in self._diagrams:
            words = self.vocabulary.words(key)
            self._diagrams[key] = reduce_sentence(words, self.config.sentence_type)
        return self._diagrams[key]

    def _word_tensors(self, params: np.ndarray) -> dict[str, np.ndarray]:
        return {
            w.surface: word_state_tensor(w, self.config, self.layout.word_params(w.surface, params))
            for w in self.vocabulary
        }

    def _plan(self, tokens: tuple[str, ...], tensors: dict[str, np.ndarray]):
        if tokens not in self._plans:
            diagram = self.diagram(tokens)
            label = list(range(sum(len(w.ptype) for w in diagram.words)))
            for i, j in diagram.links:
                label[j] = label[i]
            subscripts = []
            pos = 0
            for w in diagram.words:
                subscripts.append(label[pos:pos + len(w.ptype)])
                pos += len(w.ptype)
            out = [label[i] for i in diagram.residue]
            operands = [x for w, sub in zip(diagram.words, subscripts) for x in (tensors[w.surface], sub)]
            path = np.einsum_path(*operands, out, optimize="optimal")[0]
            self._plans[tokens] = (subscripts, out, path)
        return self._plans[tokens]

    def _contract(self, tokens: tuple[str, ...], tensors: dict[str, np.ndarray]) -> np.ndarray:
        subscripts, out, path = self._plan(tokens, tensors)
        diagram = self._diagrams[tokens]
        operands = [x for w, sub in zip(diagram.words, subscripts) for x in (tensors[w.surface], sub)]
        return np.einsum(*operands, out, optimize=path).reshape(-1)

    def _probability(self, vec: np.ndarray) -> float:
        if self.config.connector_mode:
            weights = np.abs(vec) ** 2
            norm = float(weights.sum())
            if norm < 1e-14:
                self.zero_probability_events += 1
                return 0.5
            return float(weights[1] / norm)
        return min(1.0, float(abs(vec[0]) ** 2))

    def predict(self, params: Sequence[float], tokens: Sequence[str]) -> tuple[float, int]:
        """Probability and thresholded label; ties (p == 0.5) go to 1."""
        p = self.probabilities(params, [tokens])[0]
        return p, int(p >= 0.5)

    def probabilities(self, params: Sequence[float], batch: Sequence[Sequence[str]]) -> list[float]:
        params = np.asarray(params, dtype=float)
        tensors = self._word_tensors(params)
        return [self._probability(self._contract(tuple(tokens), tensors)) for tokens in batch]

    def loss(self, params: Sequence[float], items: Sequence[Item]) -> float:
        """Mean squared error between probability and label."""
        if not items:
            return 0.0
        probs = self.probabilities(params, [tokens for tokens, _ in items])
        return float(
            sum((p - label) ** 2 for p, (_, label) in zip(probs, items)) / len(items)
        )

    def score(self, params: Sequence[float], items: Sequence[Item]) -> float:
        if not items:
            return 0.0
        probs = self.probabilities(params, [tokens for tokens, _ in items])
        return sum(int(p >= 0.5) == label for p, (_, label) in zip(probs, items)) / len(items)

    def init_params(self, seed: int, spread: float = 2.0) -> np.ndarray:
        return np.random.default_rng(seed).uniform(0.0, spread, size=self.n_params)


@dataclass
class TrainReport:
    loss_curve: list[float]
    train_score: float
    test_score: float
    total_score: float
    best_params: list[float]
    seed: int
    optimizer: str
    zero_probability_events: int = 0

    def to_json(self) -> dict:
        return {
            "optimizer": self.optimizer,
            "seed": self.seed,
            "train_score": self.train_score,
            "test_score": self.test_score,
            "total_score": self.total_score,
            "best_params": self.best_params,
            "loss_curve": self.loss_curve,
            "zero_probability_events": self.zero_probability_events,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _finish_report(
    evaluator: SentenceEvaluator,
    data: LabeledDataset,
    best_params: np.ndarray,
    curve: list[float],
    seed: int,
    optimizer: str,
    zero_events: int,
) -> TrainReport:
    predictions = {
        tokens: evaluator.predict(best_params, tokens)[1] for tokens, _ in data.items
    }
    def correct(items):
        return sum(predictions[tokens] == label for tokens, label in items)
    n_train, n_test = len(data.train_items), len(data.test_items)
    return TrainReport(
        loss_curve=[float(x) for x in curve],
        train_score=correct(data.train_items) / n_train if n_train else 0.0,
        test_score=correct(data.test_items) / n_test if n_test else 0.0,
        total_score=correct(data.items) / len(data.items) if data.items else 0.0,
        best_params=[float(x) for x in best_params],
        seed=seed,
        optimizer=optimizer,
        zero_probability_events=zero_events,
    )


def train_spsa(
    evaluator: SentenceEvaluator,
    data: LabeledDataset,
    init_params: np.ndarray | None = None,
    iterations: int = 200,
    a: float = 1.0,
    c: float = 0.1,
    seed: int = 0,
) -> TrainReport:
    """Simultaneous perturbation stochastic approximation on the train split.

    Gain schedules ``a_k = a / (k + 1 + A)**0.602`` with ``A`` a tenth of
    the iteration budget and ``c_k = c / (k + 1)**0.101``; the gradient is
    estimated from two loss evaluations along one Rademacher direction per
    iteration.  Deterministic for a fixed seed.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    rng = np.random.default_rng(seed)
    theta = (
        np.array(init_params, dtype=float)
        if init_params is not None
        else rng.uniform(0.0, 2.0, size=evaluator.n_params)
    )
    if theta.shape != (evaluator.n_params,):
        raise ValueError(f"expected {evaluator.n_params} parameters, got {theta.shape}")
    train = data.train_items
    big_a = 0.1 * iterations
    start_events = evaluator.zero_probability_events
    curve: list[float] = []
    best_loss, best_theta = float("inf"), theta.copy()
    for k in range(iterations):
        a_k = a / (k + 1 + big_a) ** 0.602
        c_k = c / (k + 1) ** 0.101
        if evaluator.n_params:
            delta = rng.choice([-1.0, 1.0], size=evaluator.n_params)
            plus = evaluator.loss(theta + c_k * delta, train)
            minus = evaluator.loss(theta - c_k * delta, train)
            theta = theta - a_k * (plus - minus) / (2 * c_k) * delta
        current = evaluator.loss(theta, train)
        curve.append(current)
        if current < best_loss:
            best_loss, best_theta = current, theta.copy()
    return _finish_report(
        evaluator, data, best_theta, curve, seed, "spsa",
        evaluator.zero_probability_events - start_events,
    )


def train_random_search(
    evaluator: SentenceEvaluator,
    data: LabeledDataset,
    samples: int = 100,
    search_range: float = 2.0,
    seed: int = 0,
) -> TrainReport:
    """Uniform random exploration of the parameter box, best train loss wins.

    The loss curve records the best loss seen so far after each draw.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    train = data.train_items
    start_events = evaluator.zero_probability_events
    best_loss, best_theta = float("inf"), np.zeros(evaluator.n_params)
    curve: list[float] = []
    for _ in range(samples):
        theta = rng.uniform(0.0, search_range, size=evaluator.n_params)
        current = evaluator.loss(theta, train)
        if current < best_loss:
            best_loss, best_theta = current, theta
        curve.append(best_loss)
    return _finish_report(
        evaluator, data, best_theta, curve, seed, "random_search",
        evaluator.zero_probability_events - start_events,
    )


def self_label(
    evaluator: SentenceEvaluator,
    params: Sequence[float],
    sentences: Iterable[Sequence[str]],
) -> LabeledDataset:
    """Label sentences with the model's own predictions at fixed parameters."""
    items = [
        (tuple(tokens), evaluator.predict(params, tokens)[1]) for tokens in sentences
    ]
    return LabeledDataset(items)


def cycle_params(values: Sequence[float], n_params: int) -> np.ndarray:
    """Broadcast a short value list over a full parameter vector by cycling."""
    if not len(values):
        raise ValueError("need at least one value")
    return np.array([values[i % len(values)] for i in range(n_params)], dtype=float)


def label_by_logic(
    sentences: Iterable[Sequence[str]],
    facts: dict[tuple, bool],
    negation: str = "don't",
    conjunction: str = "and",
    disjunction: str = "or",
) -> LabeledDataset:
    """Assign logically consistent labels to connector sentences.

    Base truth values come from ``facts`` keyed by ``(subject, verb)`` or
    ``(subject, verb, object)``.  Negations flip their verb group, and
    conjunction / disjunction fold left over the groups.
    """
    items: list[Item] = []
    for tokens in sentences:
        items.append((tuple(tokens), int(_evaluate_logic(list(tokens), facts, negation, conjunction, disjunction))))
    return LabeledDataset(items)


def _evaluate_logic(tokens, facts, negation, conjunction, disjunction) -> bool:
    subject, rest = tokens[0], tokens[1:]
    groups: list[list[str]] = [[]]
    operators: list[str] = []
    for tok in rest:
        if tok in (conjunction, disjunction):
            operators.append(tok)
            groups.append([])
        else:
            groups[-1].append(tok)
    def group_value(group: list[str]) -> bool:
        flips = 0
        while group and group[0] == negation:
            flips += 1
            group = group[1:]
        if not group:
            raise VocabularyMiss("verb group is empty")
        key = (subject, *group)
        if key not in facts:
            raise VocabularyMiss(f"no base fact for {key}")
        return bool(facts[key]) ^ (flips % 2 == 1)
    value = group_value(groups[0])
    for op, group in zip(operators, groups[1:]):
        nxt = group_value(group)
        value = (value and nxt) if op == conjunction else (value or nxt)
    return value
