"""Pregroup-grammar sentence compiler with four semantic back ends.

Sentences typed in a pregroup grammar reduce to diagrams that can be
evaluated as dense tensor contractions, as parameterized quantum
circuits (simulated), as bitstring patterns in a probabilistic quantum
memory, or as positive operators ordered by entailment.
"""

from .ansatz import AnsatzConfig, ParamLayout, connector_vocabulary
from .embedding import EmbeddingTable, build_embeddings
from .errors import DomainError, NoParse, QnlpError
from .pregroup import (
    PregroupType,
    ReductionDiagram,
    SimpleType,
    TypedWord,
    Vocabulary,
    concat,
    generate,
    reduce,
)
from .simulator import Circuit, Gate, postselect, sample, simulate
from .tensors import WordTensor, cap, csc_meaning, storage_estimate
from .training import LabeledDataset, SentenceEvaluator, TrainReport, train_random_search, train_spsa

__version__ = "0.1.0"

__all__ = [
    "AnsatzConfig",
    "Circuit",
    "DomainError",
    "EmbeddingTable",
    "Gate",
    "LabeledDataset",
    "NoParse",
    "ParamLayout",
    "PregroupType",
    "QnlpError",
    "ReductionDiagram",
    "SentenceEvaluator",
    "SimpleType",
    "TrainReport",
    "TypedWord",
    "Vocabulary",
    "WordTensor",
    "build_embeddings",
    "cap",
    "concat",
    "connector_vocabulary",
    "csc_meaning",
    "generate",
    "postselect",
    "reduce",
    "sample",
    "simulate",
    "storage_estimate",
    "train_random_search",
    "train_spsa",
]
