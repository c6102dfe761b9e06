"""Positive-operator word and sentence semantics with graded ordering.

Words are real symmetric PSD matrices: a pure word is the outer product
of its feature vector, a hyperonym is the sum over its hyponyms'
operators.  ``A <= B`` in the Loewner sense (``B - A`` PSD) reads as
hyponymy between words and entailment between sentences; the graded
variant returns the largest ``k`` with ``B - k A`` still positive,
clamped to 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, EmptyHyponymSet, ZeroOperator, ZeroVector

PSD_TOL = 1e-9
SYMMETRY_TOL = 1e-12


def _min_eig(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(matrix)[0])


def _max_eig(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(matrix)[-1])


@dataclass(frozen=True)
class PositiveOperator:
    """A real symmetric matrix with (numerically) non-negative spectrum."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
            raise DomainError("operator is not symmetric")
        if _min_eig(m) < -PSD_TOL:
            raise DomainError("operator is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def max_eigenvalue(self) -> float:
        return _max_eig(self.matrix)

    def __add__(self, other: "PositiveOperator") -> "PositiveOperator":
        _check_dims(self, other)
        return PositiveOperator(self.matrix + other.matrix)


def _check_dims(a: PositiveOperator, b: PositiveOperator) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"operator dims {a.dim} != {b.dim}")


def pure_operator(v: Sequence[float]) -> PositiveOperator:
    """Rank-one operator |v><v| of a word vector."""
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ZeroVector("cannot build an operator from the zero vector")
    return PositiveOperator(np.outer(v, v))


def hyperonym_operator(hyponyms: Sequence[Sequence[float]]) -> PositiveOperator:
    """Sum of the hyponyms' pure operators."""
    vectors = [np.asarray(v, dtype=float) for v in hyponyms]
    if not vectors:
        raise EmptyHyponymSet("a hyperonym needs at least one hyponym")
    dims = {v.shape for v in vectors}
    if len(dims) > 1:
        raise DimensionMismatch("hyponym vectors must share a dimension")
    return PositiveOperator(sum(np.outer(v, v) for v in vectors))


def loewner_leq(a: PositiveOperator, b: PositiveOperator, tol: float = PSD_TOL) -> bool:
    """``a <= b`` iff ``b - a`` has no eigenvalue below ``-tol``."""
    _check_dims(a, b)
    return _min_eig(b.matrix - a.matrix) >= -tol


def graded_hyponymy(
    a: PositiveOperator, b: PositiveOperator, precision: float = 1e-6, tol: float = PSD_TOL
) -> float:
    """Largest ``k`` in [0, 1] with ``b - k a`` positive, by bisection."""
    _check_dims(a, b)
    if a.max_eigenvalue() <= tol:
        raise ZeroOperator("graded hyponymy of the zero operator is undefined")
    if loewner_leq(a, b, tol):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if _min_eig(b.matrix - mid * a.matrix) >= -tol:
            lo = mid
        else:
            hi = mid
    return lo


def normalize(w: PositiveOperator) -> PositiveOperator:
    """Scale so the largest eigenvalue is exactly 1."""
    top = w.max_eigenvalue()
    if top <= PSD_TOL:
        raise ZeroOperator("cannot normalize the zero operator")
    return PositiveOperator(w.matrix / top)


def negate(w: PositiveOperator) -> PositiveOperator:
    """Complement against the identity; requires largest eigenvalue <= 1."""
    if w.max_eigenvalue() > 1.0 + PSD_TOL:
        raise DomainError("negation needs an operator with largest eigenvalue <= 1")
    return PositiveOperator(np.eye(w.dim) - w.matrix)


def _partial_trace_second(matrix: np.ndarray, d: int) -> np.ndarray:
    blocks = matrix.reshape(d, d, d, d)
    return np.einsum("ikjk->ij", blocks)


def compose_sentence(
    subject: PositiveOperator,
    verb: PositiveOperator,
    obj: PositiveOperator | None = None,
    model: str = "mult",
) -> PositiveOperator:
    """Combine word operators into a sentence operator.

    ``verb_only`` keeps the verb's noun marginal (a relational verb on
    the doubled space is partial-traced down); ``addition`` is the
    normalized sum; ``mult`` the normalized entrywise product.
    """
    words = [subject, verb] + ([obj] if obj is not None else [])
    if model == "verb_only":
        if verb.dim == subject.dim ** 2:
            return normalize(PositiveOperator(_partial_trace_second(verb.matrix, subject.dim)))
        _check_dims(subject, verb)
        return normalize(verb)
    for w in words[1:]:
        _check_dims(words[0], w)
    if model == "addition":
        total = words[0].matrix.copy()
        for w in words[1:]:
            total = total + w.matrix
        return normalize(PositiveOperator(total))
    if model == "mult":
        total = words[0].matrix.copy()
        for w in words[1:]:
            total = total * w.matrix
        return normalize(PositiveOperator(total))
    raise ValueError(f"unknown composition model {model!r}")


def entails(s1: PositiveOperator, s2: PositiveOperator, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Crisp and graded entailment between sentence operators.

    Both operators are normalized by their common largest eigenvalue, so
    the Loewner decision is scale-free but the ordering between the two
    is preserved.
    """
    scale = max(s1.max_eigenvalue(), s2.max_eigenvalue())
    if scale <= PSD_TOL:
        raise ZeroOperator("cannot compare zero operators")
    n1 = PositiveOperator(s1.matrix / scale)
    n2 = PositiveOperator(s2.matrix / scale)
    return loewner_leq(n1, n2, tol), graded_hyponymy(n1, n2, tol=tol)


@dataclass
class WordSpace:
    """Feature basis labels with non-negative word vectors over them."""

    basis: list[str]
    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        self.vectors = {w: np.asarray(v, dtype=float) for w, v in self.vectors.items()}
        for w, v in self.vectors.items():
            if v.shape != (len(self.basis),):
                raise DimensionMismatch(f"vector for {w!r} does not match basis size")

    def vector(self, word: str) -> np.ndarray:
        if word not in self.vectors:
            raise DomainError(f"no vector for word {word!r}")
        return self.vectors[word]

    def operator(self, word: str) -> PositiveOperator:
        return pure_operator(self.vector(word))

    def hyperonym(self, words: Sequence[str]) -> PositiveOperator:
        return hyperonym_operator([self.vector(w) for w in words])

    @staticmethod
    def from_json(data: dict) -> "WordSpace":
        return WordSpace(list(data["basis"]), {w: v for w, v in data["vectors"].items()})

    @staticmethod
    def load(path) -> "WordSpace":
        with open(path, encoding="utf-8") as fh:
            return WordSpace.from_json(json.load(fh))
