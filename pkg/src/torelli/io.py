"""JSON documents and DOT output.

Every document is ``{"kind", "version", "payload"}``.  Rationals travel as
reduced strings ``"p/q"`` (or ``"p"`` when integral); emission is
deterministic, with sorted keys and LF newlines.
"""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import ValidationError
from .forms import QuadraticForm
from .graphs import WeightedGraph
from .tropical import NodalModel, TropicalCurve

VERSION = "1"
KINDS = ("graph", "curve", "form", "model", "delaunay", "poset", "report")
_RAT = re.compile(r"^(-?\d+)(?:/(\d+))?$")


@dataclass(frozen=True)
class Document:
    kind: str
    payload: Any
    version: str = VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown document kind {self.kind!r}")


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s, normalize: bool = False) -> Fraction:
    if isinstance(s, bool):
        raise ValidationError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValidationError(f"rationals must be strings, got {s!r}")
    m = _RAT.match(s.strip())
    if not m:
        raise ValidationError(f"malformed rational {s!r}")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    if q == 0:
        raise ValidationError(f"zero denominator in {s!r}")
    x = Fraction(p, q)
    if format_rational(x) != s:
        if not normalize:
            raise ValidationError(f"rational {s!r} is not reduced (use --normalize)")
        print(f"warning: normalized {s!r} to {format_rational(x)!r}", file=sys.stderr)
    return x


def emit(doc: Document) -> str:
    body = {"kind": doc.kind, "version": doc.version, "payload": doc.payload}
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict) or set(raw) != {"kind", "version", "payload"}:
        raise ValidationError("a document needs exactly the keys kind, version, payload")
    if raw["version"] != VERSION:
        raise ValidationError(f"unsupported schema version {raw['version']!r}")
    return Document(raw["kind"], raw["payload"], raw["version"])


def read_document(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def write_document(doc: Document, path: str | None):
    text = emit(doc)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- payload conversions ----------------------------------------------------


def graph_payload(g: WeightedGraph, labels: dict | None = None) -> dict:
    vs = []
    for v, w in zip(g.vertices, g.weights):
        item = {"id": v, "weight": w}
        if labels is not None:
            item["label"] = labels[v]
        vs.append(item)
    return {"vertices": vs, "edges": [{"id": e, "ends": [a, b]} for e, a, b in g.edges]}


def _require(d, key, kind):
    if not isinstance(d, dict) or key not in d:
        raise ValidationError(f"{kind} payload is missing {key!r}")
    return d[key]


def graph_from_payload(p) -> tuple[WeightedGraph, dict | None]:
    """The graph and, if every vertex carries one, its component labels."""
    vs = _require(p, "vertices", "graph")
    es = _require(p, "edges", "graph")
    try:
        ids = [str(v["id"]) for v in vs]
        weights = [v["weight"] for v in vs]
        edges = [(str(e["id"]), str(e["ends"][0]), str(e["ends"][1])) for e in es]
        if any(len(e["ends"]) != 2 for e in es):
            raise ValidationError("an edge needs exactly two ends")
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed graph payload: {exc}") from exc
    g = WeightedGraph(tuple(ids), tuple(weights), tuple(edges))
    labels = None
    if vs and all("label" in v for v in vs):
        labels = {str(v["id"]): str(v["label"]) for v in vs}
    return g, labels


def curve_payload(c: TropicalCurve) -> dict:
    p = graph_payload(c.graph)
    p["lengths"] = {e: format_rational(x) for e, x in c.length.items()}
    return p


def curve_from_payload(p, normalize: bool = False) -> TropicalCurve:
    g, _ = graph_from_payload(p)
    raw = _require(p, "lengths", "curve")
    if not isinstance(raw, dict) or set(raw) != set(g.edge_ids):
        raise ValidationError("lengths must give one value per edge")
    return TropicalCurve.build(g, {e: parse_rational(v, normalize) for e, v in raw.items()})


def model_payload(m: NodalModel) -> dict:
    p = graph_payload(m.dual)
    p["widths"] = dict(m.width)
    p["degree"] = m.extension_degree
    return p


def model_from_payload(p) -> NodalModel:
    g, _ = graph_from_payload(p)
    widths = _require(p, "widths", "model")
    degree = _require(p, "degree", "model")
    if not isinstance(widths, dict) or set(widths) != set(g.edge_ids):
        raise ValidationError("widths must give one value per edge")
    return NodalModel.build(g, widths, degree)


def form_payload(q: QuadraticForm) -> dict:
    return {"dim": q.dim, "gram": [[format_rational(x) for x in row] for row in q.gram]}


def form_from_payload(p, normalize: bool = False) -> QuadraticForm:
    gram = _require(p, "gram", "form")
    dim = _require(p, "dim", "form")
    if not isinstance(gram, list) or len(gram) != dim or any(not isinstance(r, list) or len(r) != dim for r in gram):
        raise ValidationError("gram must be a dim x dim array")
    return QuadraticForm.from_rows([[parse_rational(x, normalize) for x in row] for row in gram])


def delaunay_payload(d) -> dict:
    return {
        "ambient_dim": d.ambient_dim,
        "rank": d.rank,
        "projection": [list(r) for r in d.projection],
        "star": [[list(p) for p in c] for c in d.star],
        "f_vector": list(d.f_vector),
        "cells": sorted([[list(p) for p in c] for c in d.cells]),
    }


def matrix_payload(m) -> list:
    return [[format_rational(x) for x in row] for row in m]


# -- DOT --------------------------------------------------------------------


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def poset_dot(poset, name: str = "strata") -> str:
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for lab in poset.elements:
        lines.append(f"  {_dot_id(lab)} [label={_dot_id(f'{lab} (dim {poset.dimension[lab]})')}];")
    for a, b in poset.covering_relations():
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_payload(poset) -> dict:
    return {
        "elements": [
            {"label": lab, "dimension": poset.dimension[lab], "graph": graph_payload(poset.payload[lab])}
            for lab in poset.elements
        ],
        "relations": sorted([a, b] for a, b in poset.relations),
        "covering": [[a, b] for a, b in poset.covering_relations()],
    }

