"""Bridges, coparallel classes, 3-connectivity, Whitney twists and cyclic equivalence.

Cyclic equivalence of graphs is isomorphism of their cycle matroids: an
edge bijection carrying circuits onto circuits.  It is decided directly on
circuit sets; twists are provided separately as generators of 2-isomorphic
graphs.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import ComputationalLimitError, ValidationError
from .graphs import (
    ORDERING_LIMIT,
    WeightedGraph,
    _connected,
    _orderings,
    components,
    contract_edges,
    id_key,
)

CIRCUIT_LIMIT = 100_000


@dataclass(frozen=True)
class CoparallelPartition:
    bridges: frozenset
    classes: tuple  # tuple of frozensets, ordered by least edge id

    def class_of(self, e: str) -> frozenset | None:
        for c in self.classes:
            if e in c:
                return c
        return None


@dataclass(frozen=True)
class TwistSpec:
    pair: tuple[str, str]
    side1: frozenset  # Y1 vertices
    side2: frozenset  # Y2 vertices


def _connected_without(g: WeightedGraph, removed) -> bool:
    return _connected(g.vertices, g.without_edges(removed))


def bridges(g: WeightedGraph) -> frozenset:
    return frozenset(e for e, a, b in g.edges if a != b and not _connected_without(g, [e]))


def coparallel_classes(g: WeightedGraph) -> CoparallelPartition:
    br = bridges(g)
    rest = [e for e in g.edge_ids if e not in br]
    related = {e: {e} for e in rest}
    for e, f in itertools.combinations(rest, 2):
        if g.is_loop(e) or g.is_loop(f):
            continue
        if not _connected_without(g, [e, f]):
            related[e].add(f)
            related[f].add(e)
    classes = []
    seen = set()
    for e in sorted(rest, key=id_key):
        if e in seen:
            continue
        cls = frozenset(related[e])
        # the relation is an equivalence; check rather than assume
        for f in cls:
            if frozenset(related[f]) != cls:
                raise AssertionError(f"coparallel relation not transitive at {e}, {f}")
        seen |= cls
        classes.append(cls)
    return CoparallelPartition(br, tuple(classes))


def is_3_edge_connected(g: WeightedGraph) -> bool:
    part = coparallel_classes(g)
    return not part.bridges and all(len(c) == 1 for c in part.classes)


def _vertex_removal_connected(g: WeightedGraph, removed) -> bool:
    keep = tuple(v for v in g.vertices if v not in removed)
    es = tuple(e for e in g.edges if e[1] not in removed and e[2] not in removed)
    return _connected(keep, es)


def is_3_vertex_connected(g: WeightedGraph) -> bool:
    """No bridges or coparallel pairs, and deleting any one or two vertices leaves a connected graph.

    The empty graph counts as connected, so the theta graph and roses
    qualify.  Requiring 3-edge-connectivity as well rules out small graphs
    such as the dumbbell, where vertex deletion alone cannot see the bridge.
    """
    if not is_3_edge_connected(g):
        return False
    for pair in itertools.combinations_with_replacement(g.vertices, 2):
        if not _vertex_removal_connected(g, set(pair)):
            return False
    return True


def three_ec_plan(g: WeightedGraph) -> tuple[frozenset, dict]:
    """Edges contracted by the 3-edge-connectivization and the survivor of each class.

    Returns ``(contracted, survivors)`` where ``survivors`` maps the least edge
    id of each coparallel class to the class itself.
    """
    part = coparallel_classes(g)
    contracted = set(part.bridges)
    survivors = {}
    for cls in part.classes:
        keep = min(cls, key=id_key)
        survivors[keep] = cls
        contracted |= cls - {keep}
    return frozenset(contracted), survivors


def three_edge_connectivization(g: WeightedGraph) -> WeightedGraph:
    contracted, _ = three_ec_plan(g)
    return contract_edges(g, contracted)


# -- twists -----------------------------------------------------------------


def make_twist_spec(g: WeightedGraph, e: str, f: str) -> TwistSpec:
    if e == f:
        raise ValidationError("a twist needs two distinct edges")
    g.ends(e)
    g.ends(f)
    rest = g.without_edges([e, f])
    comps = components(g.vertices, rest)
    if len(comps) != 2:
        raise ValidationError(f"{{{e}, {f}}} is not a 2-edge-cut")
    if _connected_without(g, [e]) is False or _connected_without(g, [f]) is False:
        raise ValidationError(f"{{{e}, {f}}} contains a bridge")
    y1, y2 = (frozenset(c) for c in sorted(comps, key=lambda c: min(id_key(v) for v in c)))
    for x in (e, f):
        a, b = g.ends(x)
        if not ((a in y1 and b in y2) or (a in y2 and b in y1)):
            raise ValidationError(f"edge {x} does not cross the cut")
    return TwistSpec((e, f), y1, y2)


def twist_specs(g: WeightedGraph) -> list[TwistSpec]:
    """Every twist at a separating pair (pairs of coparallel edges)."""
    out = []
    for cls in coparallel_classes(g).classes:
        for e, f in itertools.combinations(sorted(cls, key=id_key), 2):
            out.append(make_twist_spec(g, e, f))
    return out


def twist(g: WeightedGraph, spec: TwistSpec) -> WeightedGraph:
    """Reglue across the cut: e = p1p2, f = q1q2 become p1q2 and q1p2."""
    check = make_twist_spec(g, *spec.pair)
    if {check.side1, check.side2} != {spec.side1, spec.side2}:
        raise ValidationError("twist sides do not match the graph")
    e, f = spec.pair
    y1 = spec.side1

    def split(x):
        a, b = g.ends(x)
        return (a, b) if a in y1 else (b, a)

    p1, p2 = split(e)
    q1, q2 = split(f)
    new = {e: (p1, q2), f: (q1, p2)}
    return WeightedGraph(
        g.vertices,
        g.weights,
        tuple((x, *new[x]) if x in new else (x, a, b) for x, a, b in g.edges),
    )


# -- circuits and cyclic equivalence ---------------------------------------


def _is_circuit(g: WeightedGraph, es: frozenset) -> bool:
    deg: dict[str, int] = {}
    sub = [x for x in g.edges if x[0] in es]
    for _, a, b in sub:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    return _connected(tuple(deg), tuple(sub))


def fundamental_cycle_sets(g: WeightedGraph) -> list[frozenset]:
    """Edge supports of the fundamental cycles of a BFS spanning tree."""
    from .tropical import cycle_basis

    basis = cycle_basis(g)
    return [frozenset(e for e, c in cyc.items() if c) for cyc in basis.cycles]


def circuits(g: WeightedGraph, limit: int | None = None) -> frozenset:
    """All circuits (edge sets of simple cycles, loops included) of g."""
    limit = CIRCUIT_LIMIT if limit is None else limit
    fund = fundamental_cycle_sets(g)
    if 2 ** len(fund) > 64 * limit:
        raise ComputationalLimitError("circuit enumeration", limit)
    out = set()
    for k in range(1, len(fund) + 1):
        for combo in itertools.combinations(fund, k):
            s = frozenset()
            for c in combo:
                s = s ^ c
            if s and _is_circuit(g, s):
                out.add(s)
                if len(out) > limit:
                    raise ComputationalLimitError("circuit enumeration", limit)
    return frozenset(out)


def _edge_invariants(families, colors):
    """Joint colour refinement of edges over several circuit families.

    ``families`` is a list of (edges, circuits); ``colors`` a list of dicts
    edge -> hashable.  Returns one dict edge -> int per family, with colour
    numbers comparable across families.
    """
    cur = [dict(c) for c in colors]
    containing = []
    for edges, circs in families:
        m = {e: [] for e in edges}
        for c in circs:
            for e in c:
                m[e].append(c)
        containing.append(m)
    ncolors = None
    while True:
        sigs = []
        for (edges, _), col, cont in zip(families, cur, containing):
            sigs.append({
                e: (col[e], tuple(sorted(tuple(sorted(col[x] for x in c)) for c in cont[e])))
                for e in edges
            })
        allsig = sorted({s for d in sigs for s in d.values()})
        ranks = {s: k for k, s in enumerate(allsig)}
        cur = [{e: ranks[s] for e, s in d.items()} for d in sigs]
        if len(allsig) == ncolors:
            return cur
        ncolors = len(allsig)


def _edge_colors(g: WeightedGraph, lengths: Mapping | None):
    if lengths is None:
        return {e: "" for e in g.edge_ids}
    return {e: lengths[e] for e in g.edge_ids}


def cyclically_equivalent(
    g1: WeightedGraph,
    g2: WeightedGraph,
    lengths1: Mapping | None = None,
    lengths2: Mapping | None = None,
    limit: int | None = None,
) -> dict | None:
    """Edge bijection carrying circuits of g1 onto circuits of g2 (and lengths onto lengths), or None."""
    if len(g1.edges) != len(g2.edges):
        return None
    c1, c2 = circuits(g1, limit), circuits(g2, limit)
    if len(c1) != len(c2):
        return None
    inv1, inv2 = _edge_invariants(
        [(g1.edge_ids, c1), (g2.edge_ids, c2)],
        [_edge_colors(g1, lengths1), _edge_colors(g2, lengths2)],
    )
    if sorted(inv1.values()) != sorted(inv2.values()):
        return None
    order = sorted(g1.edge_ids, key=lambda e: (sum(1 for x in inv1.values() if x == inv1[e]), id_key(e)))
    cand = {e: [f for f in sorted(g2.edge_ids, key=id_key) if inv2[f] == inv1[e]] for e in order}
    by_edge = {e: [c for c in c1 if e in c] for e in order}
    phi: dict[str, str] = {}
    used: set[str] = set()

    def consistent(e):
        for c in by_edge[e]:
            if all(x in phi for x in c) and frozenset(phi[x] for x in c) not in c2:
                return False
        return True

    def rec(i):
        if i == len(order):
            return True
        e = order[i]
        for f in cand[e]:
            if f in used:
                continue
            phi[e] = f
            used.add(f)
            if consistent(e) and rec(i + 1):
                return True
            del phi[e]
            used.discard(f)
        return False

    if not rec(0):
        return None
    assert {frozenset(phi[x] for x in c) for c in c1} == set(c2)
    return dict(phi)


def cyclic_canonical_form(g: WeightedGraph, lengths: Mapping | None = None, limit: int | None = None):
    """Canonical encoding of the cycle matroid of g (optionally with edge lengths)."""
    circs = circuits(g, limit)
    cols = _edge_colors(g, lengths)
    (inv,) = _edge_invariants([(g.edge_ids, circs)], [cols])
    by: dict[int, list[str]] = {}
    for e in g.edge_ids:
        by.setdefault(inv[e], []).append(e)
    cells = [by[k] for k in sorted(by)]
    head = tuple(str(cols[e]) for k in sorted(by) for e in by[k])
    best = None
    for order in _orderings(cells, ORDERING_LIMIT):
        pos = {e: i for i, e in enumerate(order)}
        enc = tuple(sorted(tuple(sorted(pos[e] for e in c)) for c in circs))
        if best is None or enc < best:
            best = enc
    return (len(g.edges), head, best)


def cyclic_label(g: WeightedGraph, lengths: Mapping | None = None) -> str:
    """Short canonical label of the cyclic equivalence class."""
    form = cyclic_canonical_form(g, lengths)
    digest = hashlib.sha1(repr(form).encode()).hexdigest()[:12]
    rank = g.b1
    return f"cyc:b{rank}:E{len(g.edges)}:{digest}"

