"""Command-line interface.

Exit codes: 0 success or equivalent, 1 invalid input, 2 search limit hit,
3 decided negative (inequivalent, unequal, or a check found violations).
"""

from __future__ import annotations

import argparse
import sys

from . import connectivity, delaunay as delaunay_mod, forms, graphs, stable
from . import io
from .checks import SUITES
from .connectivity import cyclically_equivalent, three_edge_connectivization
from .delaunay import decompositions_equivalent, delaunay
from .errors import ComputationalLimitError, ValidationError
from .forms import arithmetically_equivalent
from .graphs import enumerate_stable_weighted_graphs, stratum_label
from .moduli import build_mg_poset, torelli_fibers, tropical_torelli
from .stable import CurveModel, compactified_fiber_equal
from .tropical import TropicalCurve, jacobian, tropical_3ec, tropical_cyclically_equivalent, tropicalize

EXIT_OK, EXIT_INVALID, EXIT_LIMIT, EXIT_NEGATIVE = 0, 1, 2, 3

_LIMITS = [
    (graphs, "ORDERING_LIMIT"),
    (graphs, "ENUMERATION_LIMIT"),
    (connectivity, "ORDERING_LIMIT"),
    (connectivity, "CIRCUIT_LIMIT"),
    (forms, "SHORT_VECTOR_LIMIT"),
    (delaunay_mod, "WITNESS_LIMIT"),
    (delaunay_mod, "SUBSET_LIMIT"),
    (stable, "ORBIT_LIMIT"),
    (stable, "MATCH_LIMIT"),
]


def set_limits(n: int) -> list:
    """Apply one cap to every search in the package; return the previous values."""
    old = [getattr(mod, name) for mod, name in _LIMITS]
    for mod, name in _LIMITS:
        setattr(mod, name, n)
    return old


def _restore_limits(old: list):
    for (mod, name), value in zip(_LIMITS, old):
        setattr(mod, name, value)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are invalid input, not a resource limit
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


class Options:
    normalize = False


def _load(path: str) -> io.Document:
    return io.read_document(path)


def _as_curve(doc: io.Document) -> TropicalCurve:
    if doc.kind == "curve":
        return io.curve_from_payload(doc.payload, Options.normalize)
    if doc.kind == "graph":
        g, _ = io.graph_from_payload(doc.payload)
        return TropicalCurve.unit(g)
    if doc.kind == "model":
        return tropicalize(io.model_from_payload(doc.payload))
    raise ValidationError(f"expected a curve or graph document, got {doc.kind!r}")


def _as_form(doc: io.Document):
    if doc.kind == "form":
        return io.form_from_payload(doc.payload, Options.normalize)
    return jacobian(_as_curve(doc))


def _report(payload: dict) -> io.Document:
    return io.Document("report", payload)


def cmd_enumerate(args) -> int:
    if args.genus < 2:
        raise ValidationError("genus must be at least 2")
    gs = enumerate_stable_weighted_graphs(args.genus)
    doc = _report({
        "genus": args.genus,
        "count": len(gs),
        "graphs": [dict(io.graph_payload(g), label=stratum_label(g)) for g in gs],
    })
    if args.out:
        io.write_document(doc, args.out)
        print(len(gs))
    else:
        io.write_document(doc, None)
    print(f"{len(gs)} stable weighted graphs of genus {args.genus}", file=sys.stderr)
    return EXIT_OK


def cmd_jacobian(args) -> int:
    q = jacobian(_as_curve(_load(args.curve)))
    io.write_document(io.Document("form", io.form_payload(q)), args.out)
    return EXIT_OK


def cmd_delaunay(args) -> int:
    d = delaunay(_as_form(_load(args.input)))
    io.write_document(io.Document("delaunay", io.delaunay_payload(d)), args.out)
    return EXIT_OK


def cmd_3ec(args) -> int:
    doc = _load(args.input)
    if doc.kind == "curve":
        c = tropical_3ec(io.curve_from_payload(doc.payload, Options.normalize))
        out = io.Document("curve", io.curve_payload(c))
    elif doc.kind == "graph":
        g, _ = io.graph_from_payload(doc.payload)
        out = io.Document("graph", io.graph_payload(three_edge_connectivization(g)))
    else:
        raise ValidationError(f"expected a graph or curve document, got {doc.kind!r}")
    io.write_document(out, args.out)
    return EXIT_OK


def cmd_tropicalize(args) -> int:
    doc = _load(args.model)
    if doc.kind != "model":
        raise ValidationError(f"expected a model document, got {doc.kind!r}")
    c = tropicalize(io.model_from_payload(doc.payload))
    io.write_document(io.Document("curve", io.curve_payload(c)), args.out)
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _load(args.a), _load(args.b)
    payload: dict = {"mode": args.mode}
    if args.mode == "cyclic":
        if a.kind == "curve" and b.kind == "curve":
            ca, cb = _as_curve(a), _as_curve(b)
            wit = tropical_cyclically_equivalent(ca, cb)
        else:
            if a.kind != "graph" or b.kind != "graph":
                raise ValidationError("cyclic mode compares two graphs or two curves")
            wit = cyclically_equivalent(io.graph_from_payload(a.payload)[0], io.graph_from_payload(b.payload)[0])
        payload["witness"] = wit
    elif args.mode == "arithmetic":
        qa, qb = _as_form(a), _as_form(b)
        if qa.dim != qb.dim:
            raise ValidationError("forms have different dimensions")
        h = arithmetically_equivalent(qa, qb)
        payload["witness"] = h
    else:
        da, db = delaunay(_as_form(a)), delaunay(_as_form(b))
        if da.ambient_dim != db.ambient_dim:
            raise ValidationError("decompositions have different ambient dimensions")
        rel = decompositions_equivalent(da, db)
        payload["witness"] = None if rel is None else [list(r) for r in rel.witness]
    payload["equivalent"] = payload["witness"] is not None
    io.write_document(_report(payload), args.out)
    return EXIT_OK if payload["equivalent"] else EXIT_NEGATIVE


def cmd_torelli(args) -> int:
    if args.curve:
        g, q, label = tropical_torelli(_as_curve(_load(args.curve)))
        doc = _report({"genus": g, "form": io.form_payload(q), "label": label})
    else:
        if args.genus is None or args.genus < 2:
            raise ValidationError("give --genus >= 2 or --curve")
        rep = torelli_fibers(args.genus)
        doc = _report({
            "genus": args.genus,
            "classes": {k: sorted(v) for k, v in rep.classes.items()},
            "equivalence_checks": rep.equivalence_checks,
            "discrepancies": [list(map(str, d)) for d in rep.discrepancies],
        })
        if rep.discrepancies:
            io.write_document(doc, args.out)
            return EXIT_NEGATIVE
    io.write_document(doc, args.out)
    return EXIT_OK


def _as_model(doc: io.Document) -> CurveModel:
    if doc.kind != "graph":
        raise ValidationError("compactified-fiber expects graph documents (vertex labels optional)")
    g, labels = io.graph_from_payload(doc.payload)
    return CurveModel.build(g, labels)


def cmd_compactified_fiber(args) -> int:
    x1, x2 = _as_model(_load(args.a)), _as_model(_load(args.b))
    res = compactified_fiber_equal(x1, x2)
    doc = _report({"equal": res.equal, "reason": res.reason, "matching": [list(p) for p in res.matching]})
    io.write_document(doc, args.out)
    return EXIT_OK if res.equal else EXIT_NEGATIVE


def cmd_poset(args) -> int:
    if args.genus < 2:
        raise ValidationError("genus must be at least 2")
    poset = build_mg_poset(args.genus)
    if args.format == "dot":
        text = io.poset_dot(poset)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        io.write_document(io.Document("poset", io.poset_payload(poset)), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.genus < 2:
        raise ValidationError("genus must be at least 2")
    res = SUITES[args.suite](args.genus)
    doc = _report({
        "suite": res.suite,
        "genus": res.genus,
        "checked": res.checked,
        "passed": res.passed,
        "failures": [str(f) for f in res.failures],
    })
    io.write_document(doc, args.out)
    status = "PASS" if res.passed else "FAIL"
    print(f"{status} {res.suite} genus {res.genus}: {res.checked} checks, {len(res.failures)} failures", file=sys.stderr)
    return EXIT_OK if res.passed else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torelli", description="Tropical and compactified Torelli maps, combinatorially.")
    p.add_argument("--limit", type=int, help="cap for every search (enumeration, circuits, witnesses)")
    p.add_argument("--normalize", action="store_true", help="accept non-reduced rationals, normalizing with a warning")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-o", "--out", help="output path (default stdout)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("enumerate", cmd_enumerate, "list stable weighted graphs of a genus")
    sp.add_argument("--genus", type=int, required=True)
    sp = add("jacobian", cmd_jacobian, "Gram matrix of a tropical Jacobian")
    sp.add_argument("curve")
    sp = add("delaunay", cmd_delaunay, "Delaunay decomposition of a form, curve or graph")
    sp.add_argument("input")
    sp = add("3ec", cmd_3ec, "3-edge-connectivization of a graph or curve")
    sp.add_argument("input")
    sp = add("tropicalize", cmd_tropicalize, "tropical curve of a nodal model")
    sp.add_argument("model")
    sp = add("equiv", cmd_equiv, "decide cyclic, arithmetic or Delaunay equivalence")
    sp.add_argument("--mode", choices=["cyclic", "arithmetic", "delaunay"], required=True)
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("torelli-fibers", cmd_torelli, "fiber partition of a genus, or the Torelli image of a curve")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--genus", type=int)
    grp.add_argument("--curve")
    sp = add("compactified-fiber", cmd_compactified_fiber, "compare two stable curve models")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("poset", cmd_poset, "stratification poset as DOT or JSON")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--format", choices=["dot", "json"], default="json")
    sp = add("check", cmd_check, "run an invariant battery")
    sp.add_argument("--suite", choices=sorted(SUITES), required=True)
    sp.add_argument("--genus", type=int, required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    Options.normalize = args.normalize
    old = None
    if args.limit is not None:
        if args.limit < 1:
            print("error: --limit must be positive", file=sys.stderr)
            return EXIT_INVALID
        old = set_limits(args.limit)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ComputationalLimitError as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    finally:
        if old is not None:
            _restore_limits(old)


if __name__ == "__main__":
    sys.exit(main())
