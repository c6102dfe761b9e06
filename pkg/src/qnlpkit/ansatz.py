"""Typed words to parameterized circuit fragments, sentences to circuits.

Each word owns as many qubits as its simple types carry under the
qubits-per-atom map.  Depth-1 fragments: one wire is ``Rx(theta)`` then
``H`` on |0>, two wires put ``Rx(theta)`` on the first leg of a Bell
pair, three wires prepare a GHZ state with no parameter.  Deeper
fragments append alternating layers of Hadamards and adjacent-pair
controlled-Z rotations (plain ``Rz`` on single-wire words).

A reduction link is realized as a Bell effect: CNOT across the linked
wire pair, H on the first wire, post-selection of both on 0.  Each capped
pair contributes a 1/sqrt(2) amplitude factor, which the scalar-mode
evaluator compensates so circuit values coincide with the cap-contraction
semantics of :mod:`qnlpkit.tensors`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import simulator as sim
from .errors import UnsupportedArity, VocabularyMiss
from .pregroup import PregroupType, ReductionDiagram, TypedWord, Vocabulary
from .tensors import csc_meaning

SQRT2 = math.sqrt(2.0)

NEGATION_TYPE = "-1n.n"
CONNECTIVE_TYPE = "-1s.n"
#: alternative sentence-to-sentence connective shape, behind a switch
CONNECTIVE_TYPE_STS = "-1s.s"


@dataclass(frozen=True)
class AnsatzConfig:
    """Qubits per atomic type, word-circuit depth and angle convention."""

    qubits_per_type: tuple[tuple[str, int], ...]
    depth: int = 1
    angle_unit: str = "half_turns"
    sentence_type: str = "s"

    def __post_init__(self):
        counts = dict(self.qubits_per_type)
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.angle_unit not in ("half_turns", "radians"):
            raise ValueError(f"unknown angle unit {self.angle_unit!r}")
        if all(q == 0 for q in counts.values()):
            raise ValueError("at least one atomic type needs qubits")
        if counts.get(self.sentence_type, 0) not in (0, 1):
            raise ValueError("the sentence type carries 0 (scalar) or 1 (connector) qubits")

    @staticmethod
    def make(qubits: dict[str, int], depth: int = 1, angle_unit: str = "half_turns",
             sentence_type: str = "s") -> "AnsatzConfig":
        return AnsatzConfig(tuple(sorted(qubits.items())), depth, angle_unit, sentence_type)

    @staticmethod
    def scalar(qubits_n: int = 1, depth: int = 1, angle_unit: str = "half_turns") -> "AnsatzConfig":
        return AnsatzConfig.make({"n": qubits_n, "s": 0}, depth, angle_unit)

    @staticmethod
    def connector(depth: int = 1, angle_unit: str = "half_turns") -> "AnsatzConfig":
        return AnsatzConfig.make({"n": 1, "s": 1}, depth, angle_unit)

    @staticmethod
    def from_json(data: dict) -> "AnsatzConfig":
        return AnsatzConfig.make(
            {str(k): int(v) for k, v in data["qubits_per_type"].items()},
            int(data.get("depth", 1)),
            data.get("angle_unit", "half_turns"),
            data.get("sentence_type", "s"),
        )

    def to_json(self) -> dict:
        return {
            "qubits_per_type": dict(self.qubits_per_type),
            "depth": self.depth,
            "angle_unit": self.angle_unit,
            "sentence_type": self.sentence_type,
        }

    @staticmethod
    def load(path) -> "AnsatzConfig":
        with open(path, encoding="utf-8") as fh:
            return AnsatzConfig.from_json(json.load(fh))

    def qubits(self, atom: str) -> int:
        counts = dict(self.qubits_per_type)
        if atom not in counts:
            raise VocabularyMiss(f"no qubit count assigned to atomic type {atom!r}")
        return counts[atom]

    def wire_count(self, ptype: PregroupType) -> int:
        return sum(self.qubits(s.base) for s in ptype)

    def radians(self, value: float) -> float:
        return math.pi * value if self.angle_unit == "half_turns" else value

    @property
    def connector_mode(self) -> bool:
        return dict(self.qubits_per_type).get(self.sentence_type, 0) == 1


def _slot_count(wires: int, depth: int, surface: str) -> int:
    if wires > 3:
        raise UnsupportedArity(f"{surface!r} needs {wires} wires; fragments stop at 3")
    if wires == 0:
        return 0
    base = 0 if wires == 3 else 1
    per_layer = 1 if wires == 1 else wires - 1
    return base + (depth - 1) * per_layer


class ParamLayout:
    """Deterministic global ordering of rotation slots for a vocabulary.

    Slots run in vocabulary order; inside a word the depth-1 rotation
    comes first, then layer by layer, adjacent pair by adjacent pair.
    """

    def __init__(self, vocabulary: Vocabulary | Sequence[TypedWord], config: AnsatzConfig):
        self.config = config
        self.slots: list[str] = []
        self._slices: dict[str, slice] = {}
        for word in vocabulary:
            wires = config.wire_count(word.ptype)
            count = _slot_count(wires, config.depth, word.surface)
            start = len(self.slots)
            names = []
            if count and wires != 3:
                names.append(f"{word.surface}:rx")
            layer_slots = count - len(names)
            per_layer = 1 if wires == 1 else max(wires - 1, 1)
            for k in range(layer_slots):
                names.append(f"{word.surface}:l{1 + k // per_layer}p{k % per_layer}")
            self.slots.extend(names)
            self._slices[word.surface] = slice(start, start + count)

    def __len__(self) -> int:
        return len(self.slots)

    def slice_for(self, surface: str) -> slice:
        if surface not in self._slices:
            raise VocabularyMiss(f"{surface!r} has no parameter slots in this layout")
        return self._slices[surface]

    def word_params(self, surface: str, params: np.ndarray) -> np.ndarray:
        return np.asarray(params, dtype=float)[self.slice_for(surface)]


def word_circuit(word: TypedWord, config: AnsatzConfig, params: Sequence[float]) -> sim.Circuit:
    """The word's state-preparation fragment on its own wires."""
    wires = config.wire_count(word.ptype)
    params = np.asarray(params, dtype=float)
    expected = _slot_count(wires, config.depth, word.surface)
    if len(params) != expected:
        raise ValueError(f"{word.surface!r} expects {expected} parameters, got {len(params)}")
    gates: list[sim.Gate] = []
    k = 0
    if wires == 1:
        gates += [sim.RX(0, config.radians(params[0])), sim.H(0)]
        k = 1
    elif wires == 2:
        gates += [sim.H(0), sim.CNOT(0, 1), sim.RX(0, config.radians(params[0]))]
        k = 1
    elif wires == 3:
        gates += [sim.H(0), sim.CNOT(0, 1), sim.CNOT(1, 2)]
    for _layer in range(config.depth - 1):
        gates += [sim.H(i) for i in range(wires)]
        if wires == 1:
            gates.append(sim.RZ(0, config.radians(params[k])))
            k += 1
        else:
            for pair in range(wires - 1):
                gates.append(sim.CRZ(pair, pair + 1, config.radians(params[k])))
                k += 1
    return sim.Circuit(width=max(wires, 0), gates=gates)


def word_state(word: TypedWord, config: AnsatzConfig, params: Sequence[float]) -> np.ndarray:
    wires = config.wire_count(word.ptype)
    if wires == 0:
        return np.ones(1, dtype=complex)
    return sim.simulate(word_circuit(word, config, params))


def word_state_tensor(word: TypedWord, config: AnsatzConfig, params: Sequence[float]) -> np.ndarray:
    """Fragment state reshaped to one axis per simple type (dim 2**qubits)."""
    dims = tuple(2 ** config.qubits(s.base) for s in word.ptype)
    return word_state(word, config, params).reshape(dims if dims else (1,))


@dataclass
class CompiledSentence:
    """Static wiring of one reduced sentence under a config."""

    diagram: ReductionDiagram
    config: AnsatzConfig
    width: int
    word_offsets: list[int]
    cap_pairs: list[tuple[int, int]]
    residue_wires: list[int]

    @property
    def cap_factor(self) -> float:
        return SQRT2 ** len(self.cap_pairs)


def compile_sentence(diagram: ReductionDiagram, config: AnsatzConfig) -> CompiledSentence:
    """Assign wires word by word and turn links into capped wire pairs."""
    flat_wires: list[list[int]] = []
    word_offsets: list[int] = []
    wire = 0
    for word in diagram.words:
        word_offsets.append(wire)
        for s in word.ptype:
            q = config.qubits(s.base)
            flat_wires.append(list(range(wire, wire + q)))
            wire += q
    if wire > sim.MAX_WIDTH:
        raise sim.WidthExceeded(f"sentence needs {wire} qubits; cap is {sim.MAX_WIDTH}")
    cap_pairs = [
        (a, b)
        for i, j in diagram.links
        for a, b in zip(flat_wires[i], flat_wires[j])
    ]
    residue_wires = [w for i in diagram.residue for w in flat_wires[i]]
    return CompiledSentence(diagram, config, wire, word_offsets, cap_pairs, residue_wires)


def sentence_circuit(
    diagram: ReductionDiagram,
    config: AnsatzConfig,
    layout: ParamLayout,
    params: Sequence[float],
) -> tuple[sim.Circuit, CompiledSentence]:
    """Full measurable circuit: word fragments, then Bell-effect caps."""
    compiled = compile_sentence(diagram, config)
    gates: list[sim.Gate] = []
    for word, offset in zip(diagram.words, compiled.word_offsets):
        fragment = word_circuit(word, config, layout.word_params(word.surface, np.asarray(params)))
        for g in fragment.gates:
            gates.append(sim.Gate(g.kind, tuple(w + offset for w in g.wires), g.theta, g.matrix))
    postselections = []
    for a, b in compiled.cap_pairs:
        gates += [sim.CNOT(a, b), sim.H(a)]
        postselections += [(a, 0), (b, 0)]
    circuit = sim.Circuit(
        width=compiled.width,
        gates=gates,
        postselections=postselections,
        measured=list(compiled.residue_wires),
    )
    return circuit, compiled


def sentence_tensor(
    diagram: ReductionDiagram,
    config: AnsatzConfig,
    layout: ParamLayout,
    params: Sequence[float],
) -> np.ndarray:
    """Cap-contraction of the word fragment states (fast evaluation route).

    Output has one axis per residue simple type; in scalar mode that is a
    single dim-1 axis whose entry is the sentence amplitude.
    """
    params = np.asarray(params, dtype=float)
    tensors = [
        word_state_tensor(w, config, layout.word_params(w.surface, params))
        for w in diagram.words
    ]
    return csc_meaning(tensors, diagram, mode="pairwise")


def circuit_scalar(
    diagram: ReductionDiagram,
    config: AnsatzConfig,
    layout: ParamLayout,
    params: Sequence[float],
) -> complex:
    """Scalar sentence value via full statevector simulation + post-selection.

    Includes the sqrt(2)-per-cap compensation, so the result equals
    :func:`sentence_tensor` in scalar mode.  Independent of the einsum
    route; used as its cross-check.
    """
    circuit, compiled = sentence_circuit(diagram, config, layout, params)
    if compiled.residue_wires:
        raise ValueError("sentence has measured wires; use circuit_outcome_probability")
    state = sim.simulate(circuit)
    if not circuit.postselections:
        return complex(state[0]) * compiled.cap_factor
    result = sim.postselect(state, circuit.postselections)
    if result.state is None:
        return 0.0j
    return complex(result.state[0]) * math.sqrt(result.probability) * compiled.cap_factor


def circuit_outcome_probability(
    diagram: ReductionDiagram,
    config: AnsatzConfig,
    layout: ParamLayout,
    params: Sequence[float],
) -> tuple[float | None, float]:
    """P(sentence wire = 1 | caps succeed) via the circuit route.

    Returns ``(None, 0.0)`` when the projection probability vanishes.
    """
    circuit, compiled = sentence_circuit(diagram, config, layout, params)
    if len(compiled.residue_wires) != 1:
        raise ValueError("connector evaluation expects exactly one measured wire")
    state = sim.simulate(circuit)
    result = sim.postselect(state, circuit.postselections)
    if result.state is None:
        return None, 0.0
    return float(abs(result.state[1]) ** 2), result.probability


def connector_vocabulary(
    base: Vocabulary,
    negation: str = "don't",
    conjunction: str = "and",
    disjunction: str = "or",
    sentence_to_sentence: bool = False,
) -> Vocabulary:
    """Extend a vocabulary with negation / conjunction / disjunction words.

    The connective type defaults to the noun-producing shape; setting
    ``sentence_to_sentence`` switches conjunction and disjunction to the
    plain sentence-to-sentence alternative.
    """
    conn_type = CONNECTIVE_TYPE_STS if sentence_to_sentence else CONNECTIVE_TYPE
    extended = Vocabulary(base)
    for surface, tstr in ((negation, NEGATION_TYPE), (conjunction, conn_type), (disjunction, conn_type)):
        if surface and surface not in extended:
            extended.add(TypedWord(surface, PregroupType.parse(tstr)))
    return extended
