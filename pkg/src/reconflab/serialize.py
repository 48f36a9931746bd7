"""Canonical JSON encoding for every artifact the CLI reads or writes.

All artifacts travel inside a self-describing envelope {"kind": ..,
"version": 1, ..}; serialization is deterministic (sorted keys, sorted
edges) so identical inputs produce byte-identical outputs.
"""
from __future__ import annotations

import json
from typing import Any

from .dsr import DsrInstance
from .errors import MalformedInput
from .graphs import Graph
from .kernel import DcrInstance
from .reductions import NormalizedFormula
from .tapes import MultiTapeInstance, Tape, TapeInstance

VERSION = 1


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _envelope(kind: str, payload: dict) -> dict:
    return {"kind": kind, "version": VERSION, **payload}


# ---------------------------------------------------------------------------
# encoders

def graph_to_json(g: Graph) -> dict:
    payload: dict = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if g.labels:
        payload["labels"] = {str(v): lab for v, lab in sorted(g.labels.items())}
    return _envelope("graph", payload)


def tape_to_json(t: Tape) -> dict:
    out = {
        "cells": graph_to_json(t.cells),
        "content": {str(c): sorted(t.letters(c)) for c in range(t.cells.n) if t.content[c]},
        "start": t.start,
        "end": t.end,
    }
    if t.number is not None:
        out["number"] = {str(c): t.number[c] for c in range(t.cells.n)}
    return out


def tape_instance_to_json(inst: TapeInstance) -> dict:
    payload = {
        "sigma": inst.sigma,
        "tapes": [tape_to_json(t) for t in inst.tapes],
        "cs": list(inst.cs),
        "ct": list(inst.ct),
        "sync": inst.sync,
    }
    if inst.r is not None:
        payload["r"] = inst.r
    return _envelope("tape-instance", payload)


def multi_to_json(inst: MultiTapeInstance) -> dict:
    payload = {
        "sigma": inst.sigma,
        "tuples": [[tape_to_json(t) for t in tup] for tup in inst.tuples],
        "sync": inst.sync,
    }
    if inst.r is not None:
        payload["r"] = inst.r
    return _envelope("multi-tape-instance", payload)


def dsr_to_json(inst: DsrInstance) -> dict:
    payload = {
        "graph": graph_to_json(inst.graph),
        "k": inst.k,
        "source": sorted(inst.source),
        "target": sorted(inst.target),
        "rule": inst.rule,
        "connected": inst.connected,
    }
    if inst.core is not None:
        payload["core"] = sorted(inst.core)
    if inst.partition is not None:
        payload["partition"] = [sorted(p) for p in inst.partition]
    return _envelope("dsr-instance", payload)


def dcr_to_json(inst: DcrInstance) -> dict:
    payload = {
        "graph": graph_to_json(inst.graph),
        "k": inst.k,
        "source": sorted(inst.source),
        "target": sorted(inst.target),
        "d": inst.d,
        "family": inst.family,
    }
    if inst.core is not None:
        payload["core"] = sorted(inst.core)
    return _envelope("dcr-instance", payload)


def formula_to_json(phi: NormalizedFormula) -> dict:
    def node(nd):
        if nd[0] == "var":
            return ["var", nd[1]]
        return [nd[0], [node(c) for c in nd[1]]]

    return _envelope("formula", {"vars": phi.nvars, "tree": node(phi.root)})


def witness_to_json(configs) -> dict:
    return _envelope("witness", {"configs": [sorted(c) for c in configs]})


def encode(obj: Any) -> dict:
    if isinstance(obj, Graph):
        return graph_to_json(obj)
    if isinstance(obj, TapeInstance):
        return tape_instance_to_json(obj)
    if isinstance(obj, MultiTapeInstance):
        return multi_to_json(obj)
    if isinstance(obj, DsrInstance):
        return dsr_to_json(obj)
    if isinstance(obj, DcrInstance):
        return dcr_to_json(obj)
    if isinstance(obj, NormalizedFormula):
        return formula_to_json(obj)
    raise MalformedInput(f"cannot encode {type(obj).__name__}")


# ---------------------------------------------------------------------------
# decoders

def _need(payload: dict, key: str):
    if key not in payload:
        raise MalformedInput(f"missing field {key!r}")
    return payload[key]


def graph_from_json(payload: dict) -> Graph:
    if payload.get("kind", "graph") != "graph":
        raise MalformedInput("expected a graph document")
    try:
        n = int(_need(payload, "n"))
        edges = [(int(u), int(v)) for u, v in _need(payload, "edges")]
        labels = {int(v): str(lab) for v, lab in payload.get("labels", {}).items()}
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad graph document: {exc}") from exc
    return Graph(n, edges, labels)


def tape_from_json(payload: dict) -> Tape:
    cells = graph_from_json(_need(payload, "cells"))
    content = [0] * cells.n
    for cell, letters in _need(payload, "content").items():
        c = int(cell)
        if not (0 <= c < cells.n):
            raise MalformedInput(f"content on unknown cell {c}")
        for letter in letters:
            content[c] |= 1 << int(letter)
    number = None
    if "number" in payload:
        raw = payload["number"]
        number = tuple(int(raw[str(c)]) for c in range(cells.n))
    return Tape(
        cells=cells,
        content=tuple(content),
        start=int(_need(payload, "start")),
        end=int(_need(payload, "end")),
        number=number,
    )


def tape_instance_from_json(payload: dict) -> TapeInstance:
    return TapeInstance(
        sigma=int(_need(payload, "sigma")),
        tapes=tuple(tape_from_json(t) for t in _need(payload, "tapes")),
        cs=tuple(int(c) for c in _need(payload, "cs")),
        ct=tuple(int(c) for c in _need(payload, "ct")),
        sync=bool(payload.get("sync", False)),
        r=int(payload["r"]) if payload.get("r") is not None else None,
    )


def multi_from_json(payload: dict) -> MultiTapeInstance:
    return MultiTapeInstance(
        sigma=int(_need(payload, "sigma")),
        tuples=tuple(
            tuple(tape_from_json(t) for t in tup) for tup in _need(payload, "tuples")
        ),
        sync=bool(payload.get("sync", False)),
        r=int(payload["r"]) if payload.get("r") is not None else None,
    )


def dsr_from_json(payload: dict) -> DsrInstance:
    return DsrInstance(
        graph=graph_from_json(_need(payload, "graph")),
        k=int(_need(payload, "k")),
        source=frozenset(int(v) for v in _need(payload, "source")),
        target=frozenset(int(v) for v in _need(payload, "target")),
        rule=str(payload.get("rule", "slide")),
        connected=bool(payload.get("connected", False)),
        core=frozenset(int(v) for v in payload["core"]) if "core" in payload else None,
        partition=tuple(frozenset(int(v) for v in p) for p in payload["partition"])
        if "partition" in payload
        else None,
    )


def dcr_from_json(payload: dict) -> DcrInstance:
    return DcrInstance(
        graph=graph_from_json(_need(payload, "graph")),
        k=int(_need(payload, "k")),
        source=frozenset(int(v) for v in _need(payload, "source")),
        target=frozenset(int(v) for v in _need(payload, "target")),
        d=int(_need(payload, "d")),
        family=str(payload.get("family", "k3d-free")),
        core=frozenset(int(v) for v in payload["core"]) if "core" in payload else None,
    )


def formula_from_json(payload: dict) -> NormalizedFormula:
    def node(raw):
        if not isinstance(raw, list) or not raw:
            raise MalformedInput("formula nodes are [op, ...] lists")
        if raw[0] == "var":
            return ("var", int(raw[1]))
        if raw[0] in ("and", "or"):
            return (raw[0], tuple(node(c) for c in raw[1]))
        raise MalformedInput(f"unknown formula node {raw[0]!r}")

    return NormalizedFormula(int(_need(payload, "vars")), node(_need(payload, "tree")))


def witness_from_json(payload: dict) -> list[frozenset[int]]:
    return [frozenset(int(v) for v in c) for c in _need(payload, "configs")]


DECODERS = {
    "graph": graph_from_json,
    "tape-instance": tape_instance_from_json,
    "multi-tape-instance": multi_from_json,
    "dsr-instance": dsr_from_json,
    "dcr-instance": dcr_from_json,
    "formula": formula_from_json,
    "witness": witness_from_json,
}


def decode(doc: dict):
    if not isinstance(doc, dict):
        raise MalformedInput("expected a JSON object")
    kind = doc.get("kind")
    if kind not in DECODERS:
        raise MalformedInput(f"unknown document kind {kind!r}")
    if doc.get("version", VERSION) != VERSION:
        raise MalformedInput(f"unsupported version {doc.get('version')!r}")
    return DECODERS[kind](doc)
