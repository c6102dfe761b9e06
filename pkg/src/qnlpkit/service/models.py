"""Request and response schemas for the HTTP service."""
from __future__ import annotations

from pydantic import BaseModel, Field


class VocabEntry(BaseModel):
    word: str
    type: str


class AnsatzModel(BaseModel):
    qubits_per_type: dict[str, int] = Field(default_factory=lambda: {"n": 1, "s": 0})
    depth: int = 1
    angle_unit: str = "half_turns"


class ParseRequest(BaseModel):
    vocabulary: list[VocabEntry]
    sentence: str
    target: str = "s"


class ParseResponse(BaseModel):
    tokens: list[str]
    types: list[str]
    links: list[list[int]]
    residue: list[int]
    residue_types: list[str]


class GenerateRequest(BaseModel):
    vocabulary: list[VocabEntry]
    target: str = "s"
    max_len: int = 6
    max_count: int | None = None
    seed: int = 0


class GenerateResponse(BaseModel):
    sentences: list[list[str]]


class EmbedRequest(BaseModel):
    sentences: list[str]
    basis: list[str]
    words: list[str] | None = None
    window: int | None = None


class EmbedResponse(BaseModel):
    basis: list[str]
    vectors: dict[str, list[float]]


class StorageRequest(BaseModel):
    basis_dim: int
    wire_count: int
    instances: int = 1
    bits_per_cell: int = 1


class StorageResponse(BaseModel):
    classical_bits: int
    qubits: int


class DatasetItem(BaseModel):
    sentence: str
    label: int


class QaTrainRequest(BaseModel):
    vocabulary: list[VocabEntry]
    dataset: list[DatasetItem]
    ansatz: AnsatzModel = AnsatzModel()
    optimizer: str = "spsa"
    iterations: int = 200
    samples: int = 100
    spsa_a: float = 1.0
    spsa_c: float = 0.1
    search_range: float = 2.0
    train_fraction: float = 0.5
    seed: int = 0


class QaTrainResponse(BaseModel):
    optimizer: str
    seed: int
    train_score: float
    test_score: float
    total_score: float
    best_params: list[float]
    param_slots: list[str]
    loss_curve: list[float]
    zero_probability_events: int


class QaPredictRequest(BaseModel):
    vocabulary: list[VocabEntry]
    params: list[float]
    sentences: list[str]
    ansatz: AnsatzModel = AnsatzModel()


class Prediction(BaseModel):
    sentence: str
    probability: float
    label: int


class QaPredictResponse(BaseModel):
    predictions: list[Prediction]


class MemoryEncodeRequest(BaseModel):
    sentences: list[str]
    tags: dict[str, str]
    n_basis_nouns: int = 4
    n_basis_verbs: int = 4
    noun_cutoff: int = 5
    verb_cutoff: int = 5
    noun_verb_cutoff: int = 5


class MemoryEncodeResponse(BaseModel):
    encoding: dict


class MemoryRetrieveRequest(BaseModel):
    target: str | list[str]
    patterns: list[str] | None = None
    encoding: dict | None = None
    shots: int = 0
    seed: int = 0


class PatternRow(BaseModel):
    pattern: str
    probability: float
    count: int


class MemoryRetrieveResponse(BaseModel):
    target: str
    rows: list[PatternRow]


class EntailExpression(BaseModel):
    word: str | None = None
    sentence: list[str] | None = None


class EntailPair(BaseModel):
    left: EntailExpression
    right: EntailExpression


class EntailRequest(BaseModel):
    wordspace: dict
    pairs: list[EntailPair]
    model: str = "mult"


class EntailRow(BaseModel):
    pair: str
    crisp: bool
    k: float


class EntailResponse(BaseModel):
    rows: list[EntailRow]


class ErrorResponse(BaseModel):
    error: str
    detail: str
