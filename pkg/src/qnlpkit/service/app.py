"""FastAPI application exposing every pipeline of the toolkit.

Domain errors (ungrammatical sentences, dimension clashes, ...) map to
HTTP 422 with a structured body; malformed values the models cannot rule
out map to 400.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import qmemory
from ..ansatz import AnsatzConfig
from ..embedding import build_embeddings, corpus_from_lines
from ..errors import DomainError
from ..operators import (
    PositiveOperator,
    compose_sentence,
    entails,
    hyperonym_operator,
    pure_operator,
)
from ..pregroup import Vocabulary, generate, reduce
from ..tensors import storage_estimate
from ..training import (
    LabeledDataset,
    SentenceEvaluator,
    train_random_search,
    train_spsa,
)
from . import models as m


def _vocabulary(entries: list[m.VocabEntry]) -> Vocabulary:
    return Vocabulary.from_pairs((e.word, e.type) for e in entries)


def _config(ansatz: m.AnsatzModel) -> AnsatzConfig:
    return AnsatzConfig.make(dict(ansatz.qubits_per_type), ansatz.depth, ansatz.angle_unit)


def create_app() -> FastAPI:
    app = FastAPI(title="qnlpkit", version="0.1.0")

    @app.exception_handler(DomainError)
    async def domain_error(request: Request, exc: DomainError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/parse", response_model=m.ParseResponse)
    def parse(req: m.ParseRequest) -> m.ParseResponse:
        vocab = _vocabulary(req.vocabulary)
        tokens = vocab.tokenize(req.sentence)
        diagram = reduce(vocab.words(tokens), req.target)
        return m.ParseResponse(
            tokens=tokens,
            types=[str(w.ptype) for w in diagram.words],
            links=[list(l) for l in diagram.links],
            residue=list(diagram.residue),
            residue_types=[str(t) for t in diagram.residue_types()],
        )

    @app.post("/generate", response_model=m.GenerateResponse)
    def generate_sentences(req: m.GenerateRequest) -> m.GenerateResponse:
        vocab = _vocabulary(req.vocabulary)
        found = generate(vocab, req.target, req.max_len, req.max_count, req.seed)
        return m.GenerateResponse(sentences=[list(s) for s in found])

    @app.post("/embeddings", response_model=m.EmbedResponse)
    def embeddings(req: m.EmbedRequest) -> m.EmbedResponse:
        table = build_embeddings(
            corpus_from_lines(req.sentences), req.basis, req.words, req.window
        )
        return m.EmbedResponse(basis=table.basis, vectors=table.to_json())

    @app.post("/storage", response_model=m.StorageResponse)
    def storage(req: m.StorageRequest) -> m.StorageResponse:
        est = storage_estimate(req.basis_dim, req.wire_count, req.instances, req.bits_per_cell)
        return m.StorageResponse(classical_bits=est.classical_bits, qubits=est.qubits)

    @app.post("/qa/train", response_model=m.QaTrainResponse)
    def qa_train(req: m.QaTrainRequest) -> m.QaTrainResponse:
        vocab = _vocabulary(req.vocabulary)
        evaluator = SentenceEvaluator(vocab, _config(req.ansatz))
        items = [
            (tuple(vocab.tokenize(item.sentence)), item.label) for item in req.dataset
        ]
        data = LabeledDataset(items).with_split(req.train_fraction, req.seed)
        if req.optimizer == "spsa":
            report = train_spsa(
                evaluator, data, iterations=req.iterations,
                a=req.spsa_a, c=req.spsa_c, seed=req.seed,
            )
        elif req.optimizer == "random":
            report = train_random_search(
                evaluator, data, samples=req.samples,
                search_range=req.search_range, seed=req.seed,
            )
        else:
            raise ValueError(f"unknown optimizer {req.optimizer!r}")
        return m.QaTrainResponse(param_slots=evaluator.layout.slots, **report.to_json())

    @app.post("/qa/predict", response_model=m.QaPredictResponse)
    def qa_predict(req: m.QaPredictRequest) -> m.QaPredictResponse:
        vocab = _vocabulary(req.vocabulary)
        evaluator = SentenceEvaluator(vocab, _config(req.ansatz))
        params = np.asarray(req.params, dtype=float)
        if params.shape != (evaluator.n_params,):
            raise ValueError(
                f"expected {evaluator.n_params} parameters, got {len(req.params)}"
            )
        predictions = []
        for sentence in req.sentences:
            p, label = evaluator.predict(params, vocab.tokenize(sentence))
            predictions.append(m.Prediction(sentence=sentence, probability=p, label=label))
        return m.QaPredictResponse(predictions=predictions)

    @app.post("/memory/encode", response_model=m.MemoryEncodeResponse)
    def memory_encode(req: m.MemoryEncodeRequest) -> m.MemoryEncodeResponse:
        result = qmemory.encode_corpus(
            req.sentences, req.tags,
            req.n_basis_nouns, req.n_basis_verbs,
            req.noun_cutoff, req.verb_cutoff, req.noun_verb_cutoff,
        )
        return m.MemoryEncodeResponse(encoding=result.to_json())

    @app.post("/memory/retrieve", response_model=m.MemoryRetrieveResponse)
    def memory_retrieve(req: m.MemoryRetrieveRequest) -> m.MemoryRetrieveResponse:
        encoding = qmemory.CorpusEncoding.from_json(req.encoding) if req.encoding else None
        if req.patterns is not None:
            patterns = list(req.patterns)
        elif encoding is not None:
            patterns = sorted(
                {bits for s in encoding.sentences for bits in encoding.sentence_bits(*s)}
            )
        else:
            raise ValueError("retrieve needs either explicit patterns or an encoding")
        if isinstance(req.target, str):
            target = req.target
        else:
            if encoding is None:
                raise ValueError("a token-triple target needs an encoding")
            subject, verb, obj = req.target
            candidates = encoding.sentence_bits(subject, verb, obj)
            if len(candidates) != 1:
                raise ValueError("target triple must resolve to a single basis pattern")
            target = candidates[0]
        memory = qmemory.store(patterns)
        result = qmemory.retrieve(memory, target, req.shots, req.seed)
        return m.MemoryRetrieveResponse(
            target=target,
            rows=[
                m.PatternRow(pattern=p, probability=prob, count=count)
                for p, prob, count in result.rows()
            ],
        )

    @app.post("/entailment", response_model=m.EntailResponse)
    def entailment(req: m.EntailRequest) -> m.EntailResponse:
        vectors = {w: np.asarray(v, dtype=float) for w, v in req.wordspace["vectors"].items()}
        hyperonyms = {
            name: list(members)
            for name, members in req.wordspace.get("hyperonyms", {}).items()
        }

        def word_operator(name: str) -> PositiveOperator:
            if name in vectors:
                return pure_operator(vectors[name])
            if name in hyperonyms:
                return hyperonym_operator([vectors[w] for w in hyperonyms[name]])
            raise ValueError(f"unknown word {name!r} in word space")

        def resolve(expr: m.EntailExpression) -> tuple[str, PositiveOperator]:
            if expr.word is not None:
                return expr.word, word_operator(expr.word)
            if expr.sentence:
                ops = [word_operator(w) for w in expr.sentence]
                composed = compose_sentence(
                    ops[0], ops[1], ops[2] if len(ops) > 2 else None, model=req.model
                )
                return " ".join(expr.sentence), composed
            raise ValueError("entailment expression needs a word or a sentence")

        rows = []
        for pair in req.pairs:
            left_name, left = resolve(pair.left)
            right_name, right = resolve(pair.right)
            crisp, k = entails(left, right)
            rows.append(m.EntailRow(pair=f"{left_name} -> {right_name}", crisp=crisp, k=k))
        return m.EntailResponse(rows=rows)

    return app


app = create_app()
