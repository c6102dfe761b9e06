"""Dense statevector simulation with post-selection and sampling.

Qubit 0 is the most significant bit: basis index ``int(bits, 2)`` for the
bitstring ``bits``.  States are plain complex vectors of length
``2**width``; all operations are pure functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import WidthExceeded, WidthMismatch

MAX_WIDTH = 24

#: squared-norm threshold under which a post-selection is reported as impossible
ZERO_PROBABILITY = 1e-14

_SQ2 = 1.0 / math.sqrt(2.0)
_H = np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)


@dataclass(eq=False)
class Gate:
    kind: str
    wires: tuple[int, ...]
    theta: float | None = None
    matrix: np.ndarray | None = None

    def target_matrix(self) -> np.ndarray:
        if self.kind in ("h",):
            return _H
        if self.kind in ("x", "cnot"):
            return _X
        if self.kind == "cz":
            return _Z
        if self.kind in ("rx",):
            return _rx(self.theta)
        if self.kind in ("rz", "crz"):
            return _rz(self.theta)
        if self.kind == "cu":
            return np.asarray(self.matrix, dtype=complex)
        raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def controlled(self) -> bool:
        return self.kind in ("cnot", "cz", "crz", "cu")

    def inverse(self) -> "Gate":
        if self.kind in ("h", "x", "cnot", "cz"):
            return self
        if self.kind in ("rx", "rz", "crz"):
            return Gate(self.kind, self.wires, -self.theta)
        return Gate("cu", self.wires, matrix=self.target_matrix().conj().T)

    def to_dict(self) -> dict:
        out = {"gate": self.kind, "wires": list(self.wires)}
        if self.theta is not None:
            out["theta"] = self.theta
        if self.matrix is not None:
            out["matrix"] = [[[z.real, z.imag] for z in row] for row in np.asarray(self.matrix)]
        return out


def H(q: int) -> Gate:
    return Gate("h", (q,))


def X(q: int) -> Gate:
    return Gate("x", (q,))


def CNOT(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def CZ(control: int, target: int) -> Gate:
    return Gate("cz", (control, target))


def RX(q: int, theta: float) -> Gate:
    return Gate("rx", (q,), theta)


def RZ(q: int, theta: float) -> Gate:
    return Gate("rz", (q,), theta)


def CRZ(control: int, target: int, theta: float) -> Gate:
    return Gate("crz", (control, target), theta)


def CU(control: int, target: int, matrix: np.ndarray) -> Gate:
    return Gate("cu", (control, target), matrix=matrix)


@dataclass
class Circuit:
    width: int
    gates: list[Gate] = field(default_factory=list)
    postselections: list[tuple[int, int]] = field(default_factory=list)
    measured: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.width > MAX_WIDTH:
            raise WidthExceeded(f"{self.width} qubits exceeds the {MAX_WIDTH}-qubit cap")
        for g in self.gates:
            if len(set(g.wires)) != len(g.wires) or any(not 0 <= w < self.width for w in g.wires):
                raise ValueError(f"gate {g.kind} wires {g.wires} invalid for width {self.width}")
        post = {q for q, _ in self.postselections}
        if post & set(self.measured):
            raise ValueError("postselected and measured qubits must be disjoint")

    def add(self, gate: Gate) -> "Circuit":
        self.gates.append(gate)
        return self

    def inverse_gates(self) -> list[Gate]:
        return [g.inverse() for g in reversed(self.gates)]

    def to_json(self) -> list[dict]:
        return [g.to_dict() for g in self.gates]


def basis_state(width: int, bits: str | None = None) -> np.ndarray:
    state = np.zeros(2 ** width, dtype=complex)
    state[int(bits, 2) if bits else 0] = 1.0
    return state


def _apply_single(state: np.ndarray, U: np.ndarray, q: int, n: int) -> np.ndarray:
    psi = state.reshape([2] * n)
    psi = np.tensordot(U, psi, axes=(1, q))
    return np.moveaxis(psi, 0, q).reshape(-1)


def _apply_controlled(state: np.ndarray, U: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    psi = state.reshape([2] * n).copy()
    idx = [slice(None)] * n
    idx[control] = 1
    sub = psi[tuple(idx)]
    t = target - 1 if target > control else target
    sub[...] = np.moveaxis(np.tensordot(U, sub, axes=(1, t)), 0, t)
    return psi.reshape(-1)


def apply_gate(state: np.ndarray, gate: Gate, width: int) -> np.ndarray:
    U = gate.target_matrix()
    if gate.controlled:
        return _apply_controlled(state, U, gate.wires[0], gate.wires[1], width)
    return _apply_single(state, U, gate.wires[0], width)


def simulate(circuit: Circuit, initial: str | None = None) -> np.ndarray:
    """Apply the circuit's gates in order to a computational basis state."""
    if initial is not None and len(initial) != circuit.width:
        raise WidthMismatch(f"initial state {initial!r} has wrong width for {circuit.width} qubits")
    state = basis_state(circuit.width, initial)
    for gate in circuit.gates:
        state = apply_gate(state, gate, circuit.width)
    return state


class PostselectResult(NamedTuple):
    """``state is None`` signals a (near-)zero-probability post-selection."""

    state: np.ndarray | None
    probability: float


def postselect(state: np.ndarray, constraints: Sequence[tuple[int, int]]) -> PostselectResult:
    """Project onto the required outcomes and drop the constrained qubits.

    Returns the renormalized residual state (remaining qubits keep their
    relative order) together with the pre-normalization squared norm.
    """
    n = int(math.log2(len(state)))
    qubits = [q for q, _ in constraints]
    if len(set(qubits)) != len(qubits):
        raise ValueError("postselection constraints must name distinct qubits")
    idx: list = [slice(None)] * n
    for q, outcome in constraints:
        if not 0 <= q < n:
            raise WidthMismatch(f"qubit {q} out of range for {n}-qubit state")
        idx[q] = int(outcome)
    sub = state.reshape([2] * n)[tuple(idx)].reshape(-1)
    probability = float(np.vdot(sub, sub).real)
    if probability < ZERO_PROBABILITY:
        return PostselectResult(None, 0.0)
    return PostselectResult(sub / math.sqrt(probability), probability)


def sample(state: np.ndarray, shots: int, seed: int = 0) -> dict[str, int]:
    """Multinomial draw from the Born distribution; deterministic per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    n = int(math.log2(len(state)))
    probs = np.abs(state) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c}
