"""Dense tensor-contraction semantics for reduced sentences.

Word meanings are multi-arrays with one axis per simple type.  The
sentence meaning is their joint contraction: every reduction link places
a cap (the row vector ``sum_i <ii|``) across the two linked axes, and the
residue axes survive as the output shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .pregroup import ReductionDiagram

#: total flat dimension allowed in the brute-force reference mode
REFERENCE_DIM_CAP = 2 ** 10


def cap(dim: int) -> np.ndarray:
    """The cap over a ``dim``-dimensional wire pair, as a flat row vector."""
    if dim < 1:
        raise ValueError("cap dimension must be >= 1")
    vec = np.zeros(dim * dim)
    vec[np.arange(dim) * dim + np.arange(dim)] = 1.0
    return vec


@dataclass
class WordTensor:
    word: str
    data: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.data.shape)


def _as_arrays(words: Sequence) -> list[np.ndarray]:
    return [np.asarray(w.data if isinstance(w, WordTensor) else w) for w in words]


def _wire_dims(arrays: list[np.ndarray], diagram: ReductionDiagram) -> list[int]:
    dims: list[int] = []
    for arr, word in zip(arrays, diagram.words):
        if arr.ndim != len(word.ptype):
            raise DimensionMismatch(
                f"{word.surface!r} tensor has {arr.ndim} axes for {len(word.ptype)} simple types"
            )
        dims.extend(arr.shape)
    for i, j in diagram.links:
        if dims[i] != dims[j]:
            raise DimensionMismatch(f"linked wires {i},{j} have dims {dims[i]} != {dims[j]}")
    return dims


def csc_meaning(words: Sequence, diagram: ReductionDiagram, mode: str = "pairwise") -> np.ndarray:
    """Contract word tensors along the diagram; output shape = residue dims.

    ``mode="pairwise"`` contracts index pairs without materializing the
    full product.  ``mode="reference"`` builds the full tensor product and
    applies caps as explicit delta sums (inputs capped at total dimension
    2**10); it exists as an independent oracle for the fast path.
    """
    arrays = _as_arrays(words)
    dims = _wire_dims(arrays, diagram)
    if mode == "pairwise":
        return _contract_pairwise(arrays, diagram)
    if mode == "reference":
        return _contract_reference(arrays, diagram, dims)
    raise ValueError(f"unknown mode {mode!r}")


def _contract_pairwise(arrays: list[np.ndarray], diagram: ReductionDiagram) -> np.ndarray:
    label = list(range(len([d for a in arrays for d in a.shape])))
    for i, j in diagram.links:
        label[j] = label[i]
    operands = []
    pos = 0
    for arr in arrays:
        operands.append(arr)
        operands.append(label[pos:pos + arr.ndim])
        pos += arr.ndim
    out = [label[i] for i in diagram.residue]
    return np.einsum(*operands, out, optimize=True)


def _contract_reference(arrays, diagram, dims) -> np.ndarray:
    total = math.prod(dims)
    if total > REFERENCE_DIM_CAP:
        raise ValueError(f"reference mode capped at total dimension {REFERENCE_DIM_CAP}")
    full = np.array(1.0)
    for arr in arrays:
        full = np.tensordot(full, arr, axes=0)
    full = full.reshape(dims if dims else (1,))
    out_shape = tuple(dims[i] for i in diagram.residue)
    out = np.zeros(out_shape if out_shape else (), dtype=full.dtype)
    for idx in np.ndindex(*dims):
        if all(idx[i] == idx[j] for i, j in diagram.links):
            key = tuple(idx[i] for i in diagram.residue)
            out[key] += full[idx]
    return out


@dataclass(frozen=True)
class StorageEstimate:
    classical_bits: int
    qubits: int


def storage_estimate(
    basis_dim: int, wire_count: int, instances: int = 1, bits_per_cell: int = 1
) -> StorageEstimate:
    """Classical bits vs qubits for storing sentence-product amplitudes.

    ``basis_dim ** wire_count * instances`` amplitude cells cost one bit
    each classically (the convention that prices one transitive-verb
    sentence over a 2000-word basis at 8e9 bits), while a quantum register
    only needs ``ceil(log2(cells))`` qubits.  Exact integer arithmetic, so
    large inputs cannot overflow.
    """
    if basis_dim < 1 or wire_count < 1 or instances < 1:
        raise ValueError("basis_dim, wire_count and instances must be >= 1")
    cells = basis_dim ** wire_count * instances
    qubits = (cells - 1).bit_length() if cells > 1 else 0
    return StorageEstimate(classical_bits=cells * bits_per_cell, qubits=qubits)
