"""Pregroup types, lazy reduction and sentence generation.

A word type is a sequence of simple types.  Each simple type is an atomic
name decorated with an adjoint level ``z``: ``z == 0`` is a plain atom,
``z > 0`` cancels an equal atom on its *left* (prefix notation ``-1x``),
``z < 0`` cancels an equal atom on its *right* (suffix notation ``x-1``).
Two adjacent simples ``(left, right)`` contract exactly when they share a
base and ``right.z == left.z + 1``.  A sentence is grammatical when the
flattened simple sequence reduces to the single target atom.

Type strings use the grammar ``atoms separated by '.', prefix '-1' per
leftward-cancelling level, suffix '-1' per rightward-cancelling level``,
e.g. a transitive verb is ``-1n.s.n-1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import NoParse, VocabularyMiss

MAX_ADJOINT = 8

#: default name of the distinguished sentence atom
SENTENCE = "s"


@dataclass(frozen=True, order=True)
class SimpleType:
    """One atom with its adjoint level."""

    base: str
    z: int = 0

    def __post_init__(self):
        if not self.base:
            raise ValueError("atomic type name must be non-empty")
        if abs(self.z) > MAX_ADJOINT:
            raise ValueError(f"adjoint level {self.z} out of range (|z| <= {MAX_ADJOINT})")

    def left_adjoint(self) -> "SimpleType":
        return SimpleType(self.base, self.z - 1)

    def right_adjoint(self) -> "SimpleType":
        return SimpleType(self.base, self.z + 1)

    def __str__(self) -> str:
        if self.z > 0:
            return "-1" * self.z + self.base
        return self.base + "-1" * (-self.z)


def contracts(left: SimpleType, right: SimpleType) -> bool:
    """True when ``left . right`` cancels to the unit."""
    return left.base == right.base and right.z == left.z + 1


@dataclass(frozen=True)
class PregroupType:
    """A (possibly empty) product of simple types; the empty type is the unit."""

    simples: tuple[SimpleType, ...] = ()

    def __mul__(self, other: "PregroupType") -> "PregroupType":
        return PregroupType(self.simples + other.simples)

    def __len__(self) -> int:
        return len(self.simples)

    def __iter__(self) -> Iterator[SimpleType]:
        return iter(self.simples)

    def __getitem__(self, i) -> SimpleType:
        return self.simples[i]

    def __str__(self) -> str:
        return ".".join(str(s) for s in self.simples) if self.simples else "1"

    @staticmethod
    def parse(text: str) -> "PregroupType":
        """Parse the ``-1n.s.n-1`` type grammar."""
        text = text.strip()
        if text in ("", "1"):
            return PregroupType()
        simples = []
        for chunk in text.split("."):
            atom = chunk.strip()
            z = 0
            while atom.startswith("-1"):
                z += 1
                atom = atom[2:]
            while atom.endswith("-1"):
                z -= 1
                atom = atom[:-2]
            if not atom:
                raise ValueError(f"cannot parse simple type {chunk!r}")
            simples.append(SimpleType(atom, z))
        return PregroupType(tuple(simples))


UNIT = PregroupType()


def concat(a: PregroupType, b: PregroupType) -> PregroupType:
    """Monoid product: plain concatenation with the empty type as unit."""
    return a * b


def atom(name: str, z: int = 0) -> PregroupType:
    return PregroupType((SimpleType(name, z),))


@dataclass(frozen=True)
class TypedWord:
    surface: str
    ptype: PregroupType

    def __post_init__(self):
        if not self.surface:
            raise ValueError("word surface must be non-empty")

    def __str__(self) -> str:
        return f"{self.surface}: {self.ptype}"


@dataclass(frozen=True)
class ReductionDiagram:
    """Which flattened simple-type positions cancelled, and what is left.

    ``links`` are pairs ``(i, j)`` with ``i < j`` over the concatenated
    simple sequence of ``words``; ``residue`` lists the uncancelled
    positions in order.
    """

    words: tuple[TypedWord, ...]
    links: tuple[tuple[int, int], ...]
    residue: tuple[int, ...]

    def simples(self) -> tuple[SimpleType, ...]:
        return tuple(s for w in self.words for s in w.ptype)

    def residue_types(self) -> tuple[SimpleType, ...]:
        flat = self.simples()
        return tuple(flat[i] for i in self.residue)

    def word_offsets(self) -> list[int]:
        """Starting flat position of each word's simples."""
        offsets, pos = [], 0
        for w in self.words:
            offsets.append(pos)
            pos += len(w.ptype)
        return offsets

    def to_dict(self) -> dict:
        return {
            "words": [{"word": w.surface, "type": str(w.ptype)} for w in self.words],
            "links": [list(l) for l in self.links],
            "residue": list(self.residue),
            "residue_types": [str(t) for t in self.residue_types()],
        }


def _lazy_scan(simples: Sequence[SimpleType]):
    """Run the lazy stack reduction; return (links, residue positions)."""
    links: list[tuple[int, int]] = []
    stack: list[int] = []
    for j, s in enumerate(simples):
        if stack and contracts(simples[stack[-1]], s):
            links.append((stack.pop(), j))
        else:
            stack.append(j)
    return sorted(links), stack


def reduce(sentence: Sequence[TypedWord], target: str = SENTENCE) -> ReductionDiagram:
    """Reduce a typed sentence to the target atom or raise :class:`NoParse`.

    Linear-time lazy reduction: scan the flattened simple sequence with a
    stack, cancelling against the top whenever the contraction rule
    allows, pushing otherwise.
    """
    words = tuple(sentence)
    if not words:
        raise ValueError("sentence must be non-empty")
    flat = tuple(s for w in words for s in w.ptype)
    links, residue = _lazy_scan(flat)
    goal = SimpleType(target)
    if len(residue) != 1 or flat[residue[0]] != goal:
        raise NoParse([str(flat[i]) for i in residue])
    return ReductionDiagram(words, tuple(links), tuple(residue))


def reduces(sentence: Sequence[TypedWord], target: str = SENTENCE) -> bool:
    try:
        reduce(sentence, target)
        return True
    except NoParse:
        return False


class Vocabulary:
    """An ordered list of typed words with lookup and greedy tokenization.

    Surfaces may contain spaces ("is rich"); :meth:`tokenize` matches the
    longest vocabulary entry first.
    """

    def __init__(self, entries: Iterable[TypedWord]):
        self.entries: list[TypedWord] = list(entries)
        self._by_surface = {w.surface: w for w in self.entries}
        self._by_folded = {w.surface.lower(): w for w in self.entries}

    def __iter__(self) -> Iterator[TypedWord]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self._by_surface or surface.lower() in self._by_folded

    def word(self, surface: str) -> TypedWord:
        hit = self._by_surface.get(surface) or self._by_folded.get(surface.lower())
        if hit is None:
            raise VocabularyMiss(f"unknown word {surface!r}")
        return hit

    def words(self, surfaces: Iterable[str]) -> list[TypedWord]:
        return [self.word(s) for s in surfaces]

    def tokenize(self, text: str) -> list[str]:
        """Split a raw sentence into vocabulary surfaces, longest match first."""
        parts = text.split()
        longest = max((w.surface.count(" ") + 1 for w in self.entries), default=1)
        tokens, i = [], 0
        while i < len(parts):
            for size in range(min(longest, len(parts) - i), 0, -1):
                candidate = " ".join(parts[i:i + size])
                if candidate in self:
                    tokens.append(self.word(candidate).surface)
                    i += size
                    break
            else:
                raise VocabularyMiss(f"unknown word {parts[i]!r}")
        return tokens

    def add(self, word: TypedWord) -> None:
        self.entries.append(word)
        self._by_surface[word.surface] = word
        self._by_folded[word.surface.lower()] = word

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[str, str]]) -> "Vocabulary":
        return Vocabulary(TypedWord(w, PregroupType.parse(t)) for w, t in pairs)

    @staticmethod
    def from_json(data) -> "Vocabulary":
        return Vocabulary.from_pairs((e["word"], e["type"]) for e in data)

    @staticmethod
    def load(path) -> "Vocabulary":
        with open(path, encoding="utf-8") as fh:
            return Vocabulary.from_json(json.load(fh))

    def to_json(self) -> list[dict]:
        return [{"word": w.surface, "type": str(w.ptype)} for w in self.entries]


def _push_word(stack: tuple[SimpleType, ...], word: TypedWord) -> tuple[SimpleType, ...]:
    out = list(stack)
    for s in word.ptype:
        if out and contracts(out[-1], s):
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def generate(
    vocabulary: Vocabulary | Iterable[TypedWord],
    target: str = SENTENCE,
    max_len: int = 6,
    max_count: int | None = None,
    seed: int = 0,
) -> list[tuple[str, ...]]:
    """Enumerate grammatical word sequences of length <= ``max_len``.

    Exhaustive depth-first search over the vocabulary with the reduction
    stack carried along; a sequence is kept when its stack is exactly the
    target atom.  When more than ``max_count`` sentences exist, a seeded
    subsample (in enumeration order) is returned, so output is
    deterministic for a fixed seed.
    """
    entries = list(vocabulary)
    if not entries:
        raise ValueError("vocabulary must be non-empty")
    goal = (SimpleType(target),)
    max_word = max(len(w.ptype) for w in entries)
    found: list[tuple[str, ...]] = []

    def walk(prefix: list[TypedWord], stack: tuple[SimpleType, ...]) -> None:
        if prefix and stack == goal:
            found.append(tuple(w.surface for w in prefix))
        remaining = max_len - len(prefix)
        if remaining == 0:
            return
        for w in entries:
            nxt = _push_word(stack, w)
            # each future word can shrink the stack by at most its length
            if len(nxt) - (remaining - 1) * max_word > 1:
                continue
            prefix.append(w)
            walk(prefix, nxt)
            prefix.pop()

    walk([], ())
    if max_count is not None and len(found) > max_count:
        rng = np.random.default_rng(seed)
        keep = sorted(rng.choice(len(found), size=max_count, replace=False))
        found = [found[i] for i in keep]
    return found
