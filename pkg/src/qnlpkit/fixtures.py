"""Access to the bundled example datasets.

The fixtures cover every pipeline: the royalty/pets toy corpus for
embeddings, the relative-clause vocabulary with generated, hand and
self-generated truth labels, the connector vocabulary with
logically-labelled datasets, the toy bitstring encoding for the memory
workflow, and the pets word space for entailment.
"""
from __future__ import annotations

import json
from importlib.resources import files


def fixture_path(name: str):
    return files("qnlpkit") / "fixtures" / name


def read_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def read_lines(name: str) -> list[str]:
    return read_text(name).splitlines()


def read_json(name: str):
    return json.loads(read_text(name))


def available() -> list[str]:
    return sorted(p.name for p in fixture_path("").iterdir() if p.is_file())
