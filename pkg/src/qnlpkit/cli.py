"""Command-line client for the toolkit service.

Every subcommand builds a JSON request and sends it to the HTTP API: by
default an in-process instance of the FastAPI app (no server needed),
or a remote one when ``--server`` is given.  Artifacts embed the full
run configuration, so any output can be reproduced from its own file.

Exit codes: 0 success, 1 input/usage error, 2 domain error (ungrammatical
sentence, dimension clash, ...).
"""
from __future__ import annotations

import argparse
import asyncio
import csv
import json
import sys
from pathlib import Path

import httpx


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


class ServiceClient:
    """Thin request layer: remote HTTP when ``server`` is set, else the
    FastAPI app driven in-process through an ASGI transport."""

    def __init__(self, server: str | None = None):
        self._server = server
        self._app = None
        if server is None:
            from .service import create_app

            self._app = create_app()

    def _request(self, path: str, payload: dict) -> httpx.Response:
        if self._server:
            with httpx.Client(base_url=self._server, timeout=600.0) as client:
                return client.post(path, json=payload)

        async def go() -> httpx.Response:
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://qnlp.local", timeout=600.0
            ) as client:
                return await client.post(path, json=payload)

        return asyncio.run(go())

    def post(self, path: str, payload: dict) -> dict:
        response = self._request(path, payload)
        if response.status_code == 200:
            return response.json()
        try:
            body = response.json()
            message = f"{body.get('error', response.status_code)}: {body.get('detail', '')}"
        except ValueError:
            message = f"HTTP {response.status_code}"
        sys.stderr.write(message + "\n")
        raise SystemExit(2 if response.status_code == 422 else 1)


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.strip() and not line.startswith("#")]


def _read_dataset(path: str) -> list[dict]:
    items = []
    for line in _read_lines(path):
        sentence, _, label = line.rpartition("\t")
        if not sentence:
            sentence, _, label = line.rpartition(" ")
        items.append({"sentence": sentence, "label": int(label)})
    return items


def _read_tags(path: str) -> dict[str, str]:
    tags = {}
    for line in _read_lines(path):
        token, _, tag = line.partition("\t")
        tags[token.strip()] = tag.strip()
    return tags


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _ansatz_payload(args) -> dict:
    return {
        "qubits_per_type": {"n": args.qubits_n, "s": 1 if args.mode == "connector" else 0},
        "depth": args.depth,
        "angle_unit": args.angle_unit,
    }


def _config_echo(args, names: list[str]) -> dict:
    config = {"subcommand": args.command}
    for name in names:
        config[name] = getattr(args, name.replace("-", "_"))
    return config


def cmd_parse(client: ServiceClient, args) -> int:
    payload = {
        "vocabulary": _read_json(args.vocab),
        "sentence": args.sentence,
        "target": args.target,
    }
    body = client.post("/parse", payload)
    print("tokens :", " | ".join(body["tokens"]))
    print("types  :", " | ".join(body["types"]))
    print("links  :", " ".join(f"({i},{j})" for i, j in body["links"]))
    print("residue:", " ".join(body["residue_types"]))
    if args.out:
        body["config"] = _config_echo(args, ["vocab", "sentence", "target"])
        _write_json(Path(args.out), body)
    return 0


def cmd_generate(client: ServiceClient, args) -> int:
    payload = {
        "vocabulary": _read_json(args.vocab),
        "target": args.target,
        "max_len": args.max_len,
        "max_count": args.max_count,
        "seed": args.seed,
    }
    body = client.post("/generate", payload)
    for sentence in body["sentences"]:
        print(" ".join(sentence))
    if args.out:
        body["config"] = _config_echo(args, ["vocab", "target", "max_len", "max_count", "seed"])
        _write_json(Path(args.out), body)
    return 0


def cmd_embed(client: ServiceClient, args) -> int:
    basis = _read_lines(args.basis) if Path(args.basis).exists() else args.basis.split(",")
    payload = {
        "sentences": _read_lines(args.corpus),
        "basis": [b.strip() for b in basis if b.strip()],
        "words": args.words.split(",") if args.words else None,
        "window": args.window,
    }
    body = client.post("/embeddings", payload)
    body["config"] = _config_echo(args, ["corpus", "basis", "words", "window"])
    if args.out:
        _write_json(Path(args.out), body)
    else:
        print(json.dumps(body["vectors"], indent=2, sort_keys=True))
    return 0


def _format_bits(bits: int) -> str:
    if bits < 10 ** 6:
        return str(bits)
    text = f"{float(bits):.6g}"
    return text.replace("e+0", "e").replace("e+", "e")


def cmd_storage(client: ServiceClient, args) -> int:
    payload = {
        "basis_dim": args.dim,
        "wire_count": args.wires,
        "instances": args.instances,
        "bits_per_cell": args.bits_per_cell,
    }
    body = client.post("/storage", payload)
    print(f"{_format_bits(body['classical_bits'])} bits / {body['qubits']} qubits")
    if args.out:
        body["config"] = _config_echo(args, ["dim", "wires", "instances", "bits_per_cell"])
        _write_json(Path(args.out), body)
    return 0


def cmd_qa_train(client: ServiceClient, args) -> int:
    payload = {
        "vocabulary": _read_json(args.vocab),
        "dataset": _read_dataset(args.data),
        "ansatz": _ansatz_payload(args),
        "optimizer": args.optimizer,
        "iterations": args.iterations,
        "samples": args.samples,
        "spsa_a": args.spsa_a,
        "spsa_c": args.spsa_c,
        "search_range": args.search_range,
        "train_fraction": args.split,
        "seed": args.seed,
    }
    body = client.post("/qa/train", payload)
    print(
        f"train {body['train_score']:.4f}  test {body['test_score']:.4f}  "
        f"total {body['total_score']:.4f}"
    )
    out = Path(args.out)
    body["config"] = _config_echo(
        args,
        ["vocab", "data", "mode", "optimizer", "iterations", "samples",
         "spsa_a", "spsa_c", "search_range", "split", "seed", "depth",
         "qubits_n", "angle_unit"],
    )
    curve = body.pop("loss_curve")
    _write_json(out / "report.json", body)
    _write_csv(
        out / "loss_curve.csv",
        ["iteration", "mean_loss"],
        [(i, f"{x:.12g}") for i, x in enumerate(curve)],
    )
    return 0


def cmd_qa_eval(client: ServiceClient, args) -> int:
    if args.params_file:
        report = _read_json(args.params_file)
        params = report["best_params"] if isinstance(report, dict) else report
    else:
        params = json.loads(args.params)
    if args.data:
        sentences = [item["sentence"] for item in _read_dataset(args.data)]
    else:
        sentences = [args.sentence]
    payload = {
        "vocabulary": _read_json(args.vocab),
        "params": params,
        "sentences": sentences,
        "ansatz": _ansatz_payload(args),
    }
    body = client.post("/qa/predict", payload)
    rows = [
        (p["sentence"], f"{p['probability']:.12g}", p["label"])
        for p in body["predictions"]
    ]
    for sentence, prob, label in rows:
        print(f"{label}  {prob:>14}  {sentence}")
    if args.out:
        out = Path(args.out)
        _write_csv(out / "predictions.csv", ["sentence", "probability", "label"], rows)
        _write_json(
            out / "predictions.json",
            {
                "predictions": body["predictions"],
                "config": _config_echo(
                    args,
                    ["vocab", "data", "sentence", "params", "params_file",
                     "mode", "depth", "qubits_n", "angle_unit"],
                ),
            },
        )
    return 0


def cmd_sim_encode(client: ServiceClient, args) -> int:
    payload = {
        "sentences": _read_lines(args.corpus),
        "tags": _read_tags(args.tags),
        "n_basis_nouns": args.nouns,
        "n_basis_verbs": args.verbs,
        "noun_cutoff": args.w_nouns,
        "verb_cutoff": args.w_verbs,
        "noun_verb_cutoff": args.w_nv,
    }
    body = client.post("/memory/encode", payload)
    encoding = body["encoding"]
    encoding["config"] = _config_echo(
        args, ["corpus", "tags", "nouns", "verbs", "w_nouns", "w_verbs", "w_nv"]
    )
    _write_json(Path(args.out), encoding)
    n_sentences = len(encoding.get("sentences", []))
    print(f"encoded {len(encoding['encoding']['categories'])} categories, {n_sentences} sentences")
    return 0


def cmd_sim_retrieve(client: ServiceClient, args) -> int:
    payload = {
        "target": args.target if args.target else args.target_tokens.split(),
        "patterns": _read_lines(args.patterns) if args.patterns else None,
        "encoding": _read_json(args.encoding) if args.encoding else None,
        "shots": args.shots,
        "seed": args.seed,
    }
    body = client.post("/memory/retrieve", payload)
    rows = [
        (r["pattern"], f"{r['probability']:.12g}", r["count"]) for r in body["rows"]
    ]
    for pattern, prob, count in rows:
        print(f"{pattern}  {prob:>14}  {count}")
    if args.out:
        out = Path(args.out)
        _write_csv(out / "retrieval.csv", ["pattern", "probability", "count"], rows)
        _write_json(
            out / "retrieval.json",
            {
                "target": body["target"],
                "config": _config_echo(
                    args,
                    ["patterns", "encoding", "target", "target_tokens", "shots", "seed"],
                ),
            },
        )
    return 0


def cmd_entail(client: ServiceClient, args) -> int:
    pairs = []
    def expression(text: str) -> dict:
        tokens = text.split()
        return {"word": tokens[0]} if len(tokens) == 1 else {"sentence": tokens}
    if args.pairs_file:
        for line in _read_lines(args.pairs_file):
            left, _, right = line.partition("\t")
            pairs.append({"left": expression(left), "right": expression(right)})
    else:
        for chunk in args.pairs.split(","):
            left, _, right = chunk.partition(":")
            pairs.append({"left": expression(left.strip()), "right": expression(right.strip())})
    payload = {
        "wordspace": _read_json(args.wordspace),
        "pairs": pairs,
        "model": args.model,
    }
    body = client.post("/entailment", payload)
    rows = [(r["pair"], int(r["crisp"]), f"{r['k']:.12g}") for r in body["rows"]]
    for pair, crisp, k in rows:
        print(f"{crisp}  {k:>10}  {pair}")
    if args.out:
        out = Path(args.out)
        _write_csv(out / "entailment.csv", ["pair", "crisp", "k"], rows)
        _write_json(
            out / "entailment.json",
            {
                "rows": body["rows"],
                "config": _config_echo(args, ["wordspace", "pairs", "pairs_file", "model"]),
            },
        )
    return 0


def cmd_serve(client: ServiceClient, args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="qnlp", description=__doc__)
    parser.add_argument("--server", default=None, help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="reduce a sentence to the target type")
    p.add_argument("--vocab", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--target", default="s")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("generate", help="enumerate grammatical sentences")
    p.add_argument("--vocab", required=True)
    p.add_argument("--target", default="s")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--max-count", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("embed", help="co-occurrence word vectors from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--basis", required=True, help="file (one word per line) or comma list")
    p.add_argument("--words", default=None, help="comma list; default all corpus words")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("storage", help="classical bits vs qubits estimate")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--wires", type=int, required=True)
    p.add_argument("--instances", type=int, default=1)
    p.add_argument("--bits-per-cell", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_storage)

    def qa_common(p):
        p.add_argument("--vocab", required=True)
        p.add_argument("--mode", choices=["scalar", "connector"], default="scalar")
        p.add_argument("--depth", type=int, default=1)
        p.add_argument("--qubits-n", type=int, default=1)
        p.add_argument("--angle-unit", choices=["half_turns", "radians"], default="half_turns")

    p = sub.add_parser("qa-train", help="fit circuit parameters to labelled sentences")
    qa_common(p)
    p.add_argument("--data", required=True, help="TSV lines: sentence<TAB>0|1")
    p.add_argument("--optimizer", choices=["spsa", "random"], default="spsa")
    p.add_argument("--iterations", type=int, default=200)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--spsa-a", type=float, default=1.0)
    p.add_argument("--spsa-c", type=float, default=0.1)
    p.add_argument("--search-range", type=float, default=2.0)
    p.add_argument("--split", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_qa_train)

    p = sub.add_parser("qa-eval", help="evaluate sentences at fixed parameters")
    qa_common(p)
    p.add_argument("--data", default=None)
    p.add_argument("--sentence", default=None)
    p.add_argument("--params", default=None, help="JSON list of parameter values")
    p.add_argument("--params-file", default=None, help="report.json from qa-train")
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_qa_eval)

    p = sub.add_parser("sim-encode", help="encode a corpus into bitstring patterns")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tags", required=True, help="TSV lines: token<TAB>noun|verb|stop")
    p.add_argument("--nouns", type=int, default=4)
    p.add_argument("--verbs", type=int, default=4)
    p.add_argument("--w-nouns", type=int, default=5)
    p.add_argument("--w-verbs", type=int, default=5)
    p.add_argument("--w-nv", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sim_encode)

    p = sub.add_parser("sim-retrieve", help="Hamming-weighted retrieval from a memory")
    p.add_argument("--patterns", default=None, help="file with one bitstring per line")
    p.add_argument("--encoding", default=None, help="encoding JSON from sim-encode")
    p.add_argument("--target", default=None, help="target bitstring")
    p.add_argument("--target-tokens", default=None, help="'subject verb object' resolved via encoding")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_sim_retrieve)

    p = sub.add_parser("entail", help="crisp and graded entailment between operators")
    p.add_argument("--wordspace", required=True)
    p.add_argument("--pairs", default=None, help="comma list 'a:b,c:d'")
    p.add_argument("--pairs-file", default=None, help="TSV lines: left<TAB>right")
    p.add_argument("--model", choices=["verb_only", "addition", "mult"], default="mult")
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_entail)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "qa-eval" and not (args.params or args.params_file):
        parser.error("qa-eval needs --params or --params-file")
    if args.command == "qa-eval" and not (args.data or args.sentence):
        parser.error("qa-eval needs --data or --sentence")
    if args.command == "sim-retrieve" and not (args.target or args.target_tokens):
        parser.error("sim-retrieve needs --target or --target-tokens")
    if args.command == "entail" and not (args.pairs or args.pairs_file):
        parser.error("entail needs --pairs or --pairs-file")
    try:
        client = ServiceClient(args.server) if args.command != "serve" else None
        return args.func(client, args)
    except SystemExit:
        raise
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
