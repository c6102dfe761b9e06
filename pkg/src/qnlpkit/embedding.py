"""Co-occurrence word vectors over a plain-text corpus.

A word's coordinate along a context word ``b`` is the fraction of the
sentences containing the word that also contain ``b``.  By default the
co-occurrence window is the whole sentence; ``window=k`` restricts it to
token distance <= k inside the sentence.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import UnknownWord

_PUNCT = re.compile(r"[^\w\s'-]")

Corpus = list[list[str]]


def tokenize(line: str) -> list[str]:
    """Lowercase, strip punctuation, split on whitespace."""
    return _PUNCT.sub(" ", line.lower()).split()


def load_corpus(path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return corpus_from_lines(fh)


def corpus_from_lines(lines) -> Corpus:
    corpus = []
    for line in lines:
        tokens = tokenize(line)
        if tokens:
            corpus.append(tokens)
    return corpus


@dataclass
class EmbeddingTable:
    basis: list[str]
    vectors: dict[str, np.ndarray]

    def vector(self, word: str) -> np.ndarray:
        if word not in self.vectors:
            raise UnknownWord(f"{word!r} does not occur in the corpus")
        return self.vectors[word]

    def to_json(self) -> dict:
        return {w: [float(x) for x in v] for w, v in self.vectors.items()}

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"basis": self.basis, "vectors": self.to_json()}, fh, indent=2)


def _cooccurs(sentence: list[str], w: str, b: str, window: int | None) -> bool:
    if w not in sentence or b not in sentence:
        return False
    if window is None:
        return True
    pos_w = [i for i, t in enumerate(sentence) if t == w]
    pos_b = [i for i, t in enumerate(sentence) if t == b]
    return any(abs(i - j) <= window for i in pos_w for j in pos_b if i != j or w != b)


def build_embeddings(
    corpus: Corpus,
    basis: list[str],
    words: list[str] | None = None,
    window: int | None = None,
) -> EmbeddingTable:
    """Build the table for ``words`` (default: every non-basis corpus word).

    Raises :class:`UnknownWord` when a requested word never occurs.
    """
    seen = [w for sentence in corpus for w in sentence]
    occurrences = set(seen)
    for b in basis:
        if b not in occurrences:
            raise UnknownWord(f"basis word {b!r} does not occur in the corpus")
    if words is None:
        words = sorted(occurrences - set(basis), key=seen.index)
    vectors = {}
    for w in words:
        containing = [s for s in corpus if w in s]
        if not containing:
            raise UnknownWord(f"{w!r} does not occur in the corpus")
        counts = np.array(
            [sum(_cooccurs(s, w, b, window) for s in containing) for b in basis],
            dtype=float,
        )
        vectors[w] = counts / len(containing)
    return EmbeddingTable(list(basis), vectors)
