"""Bitstring corpus encoding and probabilistic quantum-memory retrieval.

The classical front end maps basis words to Gray-coded bitstrings laid
out along the exact shortest Hamiltonian cycle of their co-occurrence
graph, so Hamming distance between codes tracks distance in the text.
The memory itself is a uniform superposition over the stored patterns;
retrieval weights each pattern by ``cos^2(pi * d_H / (2 n))`` against the
target and samples the resulting distribution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .embedding import tokenize
from .errors import BasisTooLarge, DomainError, UntaggedToken, WidthMismatch

MAX_BASIS = 12
MAX_PATTERN_WIDTH = 20


def hamming(a: str, b: str) -> int:
    """Number of differing positions between equal-width bitstrings."""
    if len(a) != len(b):
        raise WidthMismatch(f"bitstrings {a!r} and {b!r} differ in width")
    return sum(x != y for x, y in zip(a, b))


def gray_codes(width: int) -> list[str]:
    """The reflected Gray sequence: cyclically adjacent codes differ in one bit."""
    if width < 1:
        raise ValueError("width must be >= 1")
    return [format(i ^ (i >> 1), f"0{width}b") for i in range(2 ** width)]


def held_karp_cycle(weights: np.ndarray) -> tuple[list[int], float]:
    """Exact shortest Hamiltonian cycle by dynamic programming over subsets.

    ``weights`` is a symmetric cost matrix; returns the visiting order
    (starting at node 0) and the cycle cost.  Capped at 12 nodes.
    """
    w = np.asarray(weights, dtype=float)
    n = len(w)
    if n > MAX_BASIS:
        raise BasisTooLarge(f"{n} basis tokens exceed the exact-cycle cap of {MAX_BASIS}")
    if n == 1:
        return [0], 0.0
    if n == 2:
        return [0, 1], float(2 * w[0][1])
    # cost[(mask, j)]: cheapest path 0 -> j visiting exactly the nodes in mask
    cost: dict[tuple[int, int], tuple[float, int]] = {}
    for j in range(1, n):
        cost[(1 << j, j)] = (float(w[0][j]), 0)
    for mask in range(1 << (n - 1)):
        mask <<= 1  # node 0 never appears in the mask
        for j in range(1, n):
            if not mask & (1 << j) or (mask, j) not in cost:
                continue
            base, _ = cost[(mask, j)]
            for k in range(1, n):
                if mask & (1 << k):
                    continue
                key = (mask | (1 << k), k)
                candidate = base + float(w[j][k])
                if key not in cost or candidate < cost[key][0]:
                    cost[key] = (candidate, j)
    full = ((1 << n) - 1) & ~1
    best, last = min((cost[(full, j)][0] + float(w[j][0]), j) for j in range(1, n))
    order = [last]
    mask = full
    while order[-1] != 0:
        _, prev = cost[(mask, order[-1])]
        mask &= ~(1 << order[-1])
        order.append(prev)
    return order[::-1], float(best)


@dataclass
class BasisEncoding:
    """Per-category token -> bitstring maps plus the cycle orders behind them."""

    categories: dict[str, dict[str, str]]
    cycles: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        for name, mapping in self.categories.items():
            widths = {len(bits) for bits in mapping.values()}
            if len(widths) > 1:
                raise WidthMismatch(f"category {name!r} mixes bitstring widths")
            if len(set(mapping.values())) != len(mapping):
                raise ValueError(f"category {name!r} encoding is not injective")

    def width(self, category: str) -> int:
        mapping = self.categories[category]
        return len(next(iter(mapping.values())))

    def bits(self, category: str, token: str) -> str:
        return self.categories[category][token]

    def to_json(self) -> dict:
        return {"categories": self.categories, "cycles": self.cycles}

    @staticmethod
    def from_json(data: dict) -> "BasisEncoding":
        return BasisEncoding(
            {k: dict(v) for k, v in data["categories"].items()},
            {k: list(v) for k, v in data.get("cycles", {}).items()},
        )


@dataclass(frozen=True)
class CompositeToken:
    """A token expressed as an equal-weight superposition of basis tokens."""

    token: str
    category: str
    support: tuple[str, ...]

    def __post_init__(self):
        if not self.support:
            raise ValueError(f"composite token {self.token!r} has empty support")


def token_state(composite: CompositeToken, enc: BasisEncoding) -> np.ndarray:
    width = enc.width(composite.category)
    state = np.zeros(2 ** width, dtype=complex)
    for basis_token in composite.support:
        state[int(enc.bits(composite.category, basis_token), 2)] = 1.0
    return state / math.sqrt(len(composite.support))


def compose_sentence_state(
    subject: CompositeToken,
    verb: CompositeToken,
    obj: CompositeToken,
    enc: BasisEncoding,
) -> np.ndarray:
    """Tensor the three word superpositions into one register.

    The register is laid out object bits first (most significant), then
    verb, then subject, matching the worked small-corpus states this
    module reproduces.
    """
    state = np.kron(
        np.kron(token_state(obj, enc), token_state(verb, enc)), token_state(subject, enc)
    )
    return state


def sentence_patterns(
    subject: CompositeToken, verb: CompositeToken, obj: CompositeToken, enc: BasisEncoding
) -> list[str]:
    """All basis bitstrings in the sentence state, object bits first."""
    return [
        enc.bits(obj.category, o) + enc.bits(verb.category, v) + enc.bits(subject.category, s)
        for o in obj.support
        for v in verb.support
        for s in subject.support
    ]


def store(patterns: Sequence[str]) -> np.ndarray:
    """Uniform superposition over distinct equal-width patterns.

    The iterative storage circuit is emulated by constructing its output
    state directly.
    """
    patterns = list(patterns)
    if not patterns:
        raise ValueError("cannot store an empty pattern set")
    width = len(patterns[0])
    if width > MAX_PATTERN_WIDTH:
        raise WidthMismatch(f"pattern width {width} exceeds {MAX_PATTERN_WIDTH}")
    if any(len(p) != width for p in patterns):
        raise WidthMismatch("patterns must share one width")
    if len(set(patterns)) != len(patterns):
        raise ValueError("patterns must be distinct")
    state = np.zeros(2 ** width, dtype=complex)
    for p in patterns:
        state[int(p, 2)] = 1.0
    return state / math.sqrt(len(patterns))


def memory_patterns(memory: np.ndarray, tol: float = 1e-10) -> list[str]:
    width = int(math.log2(len(memory)))
    return [format(i, f"0{width}b") for i in np.nonzero(np.abs(memory) > tol)[0]]


@dataclass
class RetrievalResult:
    target: str
    probabilities: dict[str, float]
    histogram: dict[str, int]

    def rows(self) -> list[tuple[str, float, int]]:
        return [
            (p, self.probabilities[p], self.histogram.get(p, 0))
            for p in sorted(self.probabilities)
        ]


def retrieve(memory: np.ndarray, target: str, shots: int = 0, seed: int = 0) -> RetrievalResult:
    """Hamming-weighted retrieval distribution over the stored patterns.

    Pattern probability is proportional to ``cos^2(pi * d / (2 n))`` for
    Hamming distance ``d`` at register width ``n``; with ``shots > 0`` a
    multinomial histogram is drawn deterministically from the seed.
    """
    patterns = memory_patterns(memory)
    if not patterns:
        raise DomainError("memory state holds no patterns")
    n = len(patterns[0])
    if len(target) != n:
        raise WidthMismatch(f"target {target!r} does not match pattern width {n}")
    weights = np.array(
        [math.cos(math.pi * hamming(p, target) / (2 * n)) ** 2 for p in patterns]
    )
    total = float(weights.sum())
    if total <= 0.0:
        raise DomainError("every stored pattern is orthogonal to the target")
    probs = weights / total
    histogram: dict[str, int] = {}
    if shots:
        counts = np.random.default_rng(seed).multinomial(shots, probs)
        histogram = {p: int(c) for p, c in zip(patterns, counts)}
    return RetrievalResult(target, dict(zip(patterns, probs.tolist())), histogram)


@dataclass
class CorpusEncoding:
    """Everything the classical pre-processing derives from a corpus."""

    encoding: BasisEncoding
    composites: dict[str, dict[str, CompositeToken]]
    sentences: list[tuple[str, str, str]]
    subject_category: str = "noun"
    verb_category: str = "verb"
    object_category: str = "noun"

    def composite(self, category: str, token: str) -> CompositeToken:
        try:
            return self.composites[category][token]
        except KeyError:
            raise DomainError(f"no {category} token {token!r} in the encoding") from None

    def sentence_state(self, subject: str, verb: str, obj: str) -> np.ndarray:
        return compose_sentence_state(
            self.composite(self.subject_category, subject),
            self.composite(self.verb_category, verb),
            self.composite(self.object_category, obj),
            self.encoding,
        )

    def sentence_bits(self, subject: str, verb: str, obj: str) -> list[str]:
        return sentence_patterns(
            self.composite(self.subject_category, subject),
            self.composite(self.verb_category, verb),
            self.composite(self.object_category, obj),
            self.encoding,
        )

    def to_json(self) -> dict:
        return {
            "encoding": self.encoding.to_json(),
            "composites": {
                cat: {t: list(c.support) for t, c in tokens.items()}
                for cat, tokens in self.composites.items()
            },
            "sentences": [list(s) for s in self.sentences],
            "sentence_categories": [
                self.subject_category,
                self.verb_category,
                self.object_category,
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "CorpusEncoding":
        encoding = BasisEncoding.from_json(data["encoding"])
        composites = {
            cat: {t: CompositeToken(t, cat, tuple(support)) for t, support in tokens.items()}
            for cat, tokens in data["composites"].items()
        }
        for cat, mapping in encoding.categories.items():
            composites.setdefault(cat, {})
            for token in mapping:
                composites[cat].setdefault(token, CompositeToken(token, cat, (token,)))
        subj, verb, obj = data.get("sentence_categories", ["noun", "verb", "noun"])
        return CorpusEncoding(
            encoding,
            composites,
            [tuple(s) for s in data.get("sentences", [])],
            subj,
            verb,
            obj,
        )


def _occurrences(stream: list[str], tags: dict[str, str]) -> dict[str, dict[str, list[int]]]:
    by_category: dict[str, dict[str, list[int]]] = {"noun": {}, "verb": {}}
    for position, token in enumerate(stream):
        if token not in tags:
            raise UntaggedToken(f"{token!r} is missing from the tag lexicon")
        tag = tags[token]
        if tag in by_category:
            by_category[tag].setdefault(token, []).append(position)
    return by_category


def _min_distance(a: list[int], b: list[int]) -> int:
    return min(abs(i - j) for i in a for j in b)


def _encode_category(
    category: str, occurrences: dict[str, list[int]], n_basis: int, cutoff: int
) -> tuple[dict[str, str], list[str], dict[str, CompositeToken]]:
    if not occurrences:
        raise DomainError(f"no tokens tagged {category!r} in the corpus")
    ranked = sorted(occurrences, key=lambda t: (-len(occurrences[t]), occurrences[t][0]))
    basis = ranked[: min(n_basis, len(ranked))]
    weights = np.zeros((len(basis), len(basis)))
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            if i < j:
                weights[i][j] = weights[j][i] = _min_distance(occurrences[a], occurrences[b])
    order, _ = held_karp_cycle(weights)
    cycle = [basis[i] for i in order]
    width = max(1, math.ceil(math.log2(len(cycle))))
    codes = gray_codes(width)
    mapping = {token: codes[i] for i, token in enumerate(cycle)}
    composites: dict[str, CompositeToken] = {}
    for token in ranked:
        if token in mapping:
            support = (token,)
        else:
            distances = {b: _min_distance(occurrences[token], occurrences[b]) for b in basis}
            support = tuple(sorted(b for b, d in distances.items() if d <= cutoff))
            if not support:
                support = (min(distances, key=lambda b: (distances[b], b)),)
        composites[token] = CompositeToken(token, category, support)
    return mapping, cycle, composites


def encode_corpus(
    text_lines: Iterable[str],
    tags: dict[str, str],
    n_basis_nouns: int = 4,
    n_basis_verbs: int = 4,
    noun_cutoff: int = 5,
    verb_cutoff: int = 5,
    noun_verb_cutoff: int = 5,
) -> CorpusEncoding:
    """Run the classical pipeline: rank, cycle, Gray-code, project, pair.

    Basis tokens are the most frequent per category; their graph weights
    are minimum token-stream distances, the exact shortest Hamiltonian
    cycle orders them, and Gray codes along the cycle keep neighbours one
    bit apart.  Non-basis tokens are projected onto every basis token
    within the cutoff (nearest one when none qualifies), and sentences
    are NOUN-VERB-NOUN triples whose occurrences sit within the
    noun-verb cutoff.
    """
    stream = [t for line in text_lines for t in tokenize(line)]
    by_category = _occurrences(stream, tags)
    categories, cycles, composites = {}, {}, {}
    for name, n_basis, cutoff in (
        ("noun", n_basis_nouns, noun_cutoff),
        ("verb", n_basis_verbs, verb_cutoff),
    ):
        mapping, cycle, comp = _encode_category(name, by_category[name], n_basis, cutoff)
        categories[name] = mapping
        cycles[name] = cycle
        composites[name] = comp
    sentences: list[tuple[str, str, str]] = []
    noun_positions = [
        (pos, token) for token, ps in by_category["noun"].items() for pos in ps
    ]
    for verb, positions in by_category["verb"].items():
        for p in positions:
            before = [(p - pos, tok) for pos, tok in noun_positions if pos < p]
            after = [(pos - p, tok) for pos, tok in noun_positions if pos > p]
            if not before or not after:
                continue
            d_subj, subject = min(before)
            d_obj, obj = min(after)
            if d_subj <= noun_verb_cutoff and d_obj <= noun_verb_cutoff:
                triple = (subject, verb, obj)
                if triple not in sentences:
                    sentences.append(triple)
    return CorpusEncoding(BasisEncoding(categories, cycles), composites, sentences)
