"""Tropical curves, their Jacobians, 3-edge-connectivization and tropicalization of nodal models."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .connectivity import cyclically_equivalent, three_ec_plan
from .errors import ValidationError
from .forms import QuadraticForm
from .graphs import WeightedGraph, contract_edges, genus, id_key, is_stable


@dataclass(frozen=True)
class CycleBasis:
    edges: tuple[str, ...]
    tree_edges: frozenset
    defining_edges: tuple[str, ...]  # the non-tree edge of each cycle
    rows: tuple[tuple[int, ...], ...]  # one coefficient row per cycle, aligned with ``edges``

    @property
    def cycles(self) -> list[dict[str, int]]:
        return [dict(zip(self.edges, r)) for r in self.rows]

    def matrix(self) -> list[list[int]]:
        """Edge-by-cycle matrix B (|E| x b1)."""
        return [[r[i] for r in self.rows] for i in range(len(self.edges))]


def orientation(g: WeightedGraph, e: str) -> tuple[str, str]:
    """(tail, head): edges point from the smaller vertex id to the larger."""
    a, b = g.ends(e)
    return (a, b) if id_key(a) <= id_key(b) else (b, a)


def cycle_basis(g: WeightedGraph, tree: Sequence[str] | None = None) -> CycleBasis:
    """Fundamental cycles of a spanning tree.

    By default the tree comes from a BFS over sorted ids.  Each cycle is then
    re-signed so that its first nonzero overlap with an earlier cycle is
    negative, which presents the theta graph as [[2, -1], [-1, 2]].
    Passing ``tree`` skips that re-signing and orients each cycle along its
    defining edge.
    """
    inc: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e, a, b in g.edges:
        inc[a].append(e)
        if b != a:
            inc[b].append(e)
    parent: dict[str, tuple[str, str] | None] = {}
    if tree is None:
        root = min(g.vertices, key=id_key)
        parent[root] = None
        queue = deque([root])
        tree_set = set()
        while queue:
            v = queue.popleft()
            for e in sorted(inc[v], key=id_key):
                a, b = g.ends(e)
                w = b if a == v else a
                if w not in parent:
                    parent[w] = (e, v)
                    tree_set.add(e)
                    queue.append(w)
    else:
        tree_set = set(tree)
        root = min(g.vertices, key=id_key)
        parent[root] = None
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in sorted(inc[v], key=id_key):
                if e not in tree_set:
                    continue
                a, b = g.ends(e)
                w = b if a == v else a
                if w not in parent:
                    parent[w] = (e, v)
                    queue.append(w)
        if len(parent) != len(g.vertices) or len(tree_set) != len(g.vertices) - 1:
            raise ValidationError("given edges do not form a spanning tree")

    def to_root(v):
        path = []
        while parent[v] is not None:
            e, p = parent[v]
            path.append((e, v, p))
            v = p
        return path

    edges = tuple(g.edge_ids)
    col = {e: i for i, e in enumerate(edges)}
    rows = []
    defining = []
    for f in sorted((e for e in edges if e not in tree_set), key=id_key):
        row = [0] * len(edges)
        row[col[f]] = 1
        tail, head = orientation(g, f)
        if tail != head:
            up_head = to_root(head)
            up_tail = to_root(tail)
            common = {x[0] for x in up_head} & {x[0] for x in up_tail}
            # head -> lca: traverse child -> parent
            for e, child, _ in up_head:
                if e in common:
                    break
                row[col[e]] += 1 if orientation(g, e)[0] == child else -1
            # lca -> tail: traverse parent -> child
            for e, child, par in up_tail:
                if e in common:
                    break
                row[col[e]] += 1 if orientation(g, e)[0] == par else -1
        rows.append(row)
        defining.append(f)
    if tree is None:
        for i in range(len(rows)):
            for j in range(i):
                ip = sum(x * y for x, y in zip(rows[i], rows[j]))
                if ip:
                    if ip > 0:
                        rows[i] = [-x for x in rows[i]]
                    break
    return CycleBasis(edges, frozenset(tree_set), tuple(defining), tuple(tuple(r) for r in rows))


def _fraction(x) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"not a rational number: {x!r}") from exc


@dataclass(frozen=True)
class TropicalCurve:
    graph: WeightedGraph
    lengths: tuple[Fraction, ...]  # aligned with graph.edge_ids
    check_stable: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if len(self.lengths) != len(self.graph.edges):
            raise ValidationError("one length per edge is required")
        for e, x in zip(self.graph.edge_ids, self.lengths):
            if not isinstance(x, Fraction):
                raise ValidationError(f"length of {e} must be a Fraction")
            if x <= 0:
                raise ValidationError(f"length of {e} must be positive, got {x}")
        if self.check_stable and not is_stable(self.graph):
            raise ValidationError("the underlying weighted graph is not stable")

    @classmethod
    def build(cls, graph: WeightedGraph, lengths: Mapping[str, object], check_stable: bool = True) -> "TropicalCurve":
        missing = set(graph.edge_ids) - set(lengths)
        extra = set(lengths) - set(graph.edge_ids)
        if missing or extra:
            raise ValidationError(f"lengths do not match edges (missing {sorted(missing)}, extra {sorted(extra)})")
        return cls(graph, tuple(_fraction(lengths[e]) for e in graph.edge_ids), check_stable)

    @classmethod
    def unit(cls, graph: WeightedGraph, check_stable: bool = True) -> "TropicalCurve":
        return cls(graph, (Fraction(1),) * len(graph.edges), check_stable)

    @property
    def length(self) -> dict[str, Fraction]:
        return dict(zip(self.graph.edge_ids, self.lengths))

    @property
    def genus(self) -> int:
        return genus(self.graph)


@dataclass(frozen=True)
class NodalModel:
    dual: WeightedGraph
    widths: tuple[int, ...]  # aligned with dual.edge_ids
    extension_degree: int = 1

    def __post_init__(self):
        if len(self.widths) != len(self.dual.edges):
            raise ValidationError("one width per node is required")
        for e, w in zip(self.dual.edge_ids, self.widths):
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise ValidationError(f"width of {e} must be a positive integer, got {w!r}")
        d = self.extension_degree
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise ValidationError(f"extension degree must be a positive integer, got {d!r}")
        if not is_stable(self.dual):
            raise ValidationError("the dual graph is not stable")

    @classmethod
    def build(cls, dual: WeightedGraph, widths: Mapping[str, int], degree: int = 1) -> "NodalModel":
        if set(widths) != set(dual.edge_ids):
            raise ValidationError("widths do not match the nodes of the dual graph")
        return cls(dual, tuple(widths[e] for e in dual.edge_ids), degree)

    @property
    def width(self) -> dict[str, int]:
        return dict(zip(self.dual.edge_ids, self.widths))


def jacobian(c: TropicalCurve, basis: CycleBasis | None = None) -> QuadraticForm:
    """Gram matrix of Q_C: B^T diag(l) B on the cycle lattice, then a zero block for the weights."""
    basis = basis or cycle_basis(c.graph)
    ln = c.length
    rows = basis.rows
    b = len(rows)
    g = c.genus
    gram = [[Fraction(0)] * g for _ in range(g)]
    for i in range(b):
        for j in range(i, b):
            s = sum(ln[e] * x * y for e, x, y in zip(basis.edges, rows[i], rows[j]) if x and y)
            gram[i][j] = gram[j][i] = s
    return QuadraticForm.from_rows(gram)


def tropical_3ec(c: TropicalCurve) -> TropicalCurve:
    contracted, survivors = three_ec_plan(c.graph)
    graph = contract_edges(c.graph, contracted)
    ln = c.length
    lengths = {e: sum((ln[x] for x in cls), Fraction(0)) for e, cls in survivors.items()}
    return TropicalCurve.build(graph, lengths, check_stable=c.check_stable)


def tropical_cyclically_equivalent(c1: TropicalCurve, c2: TropicalCurve, limit: int | None = None) -> dict | None:
    return cyclically_equivalent(c1.graph, c2.graph, c1.length, c2.length, limit)


def tropicalize(m: NodalModel) -> TropicalCurve:
    """Edge length = node width / extension degree."""
    d = m.extension_degree
    return TropicalCurve.build(m.dual, {e: Fraction(w, d) for e, w in m.width.items()})


def subdivide_edge(c: TropicalCurve, e: str, parts: Sequence) -> TropicalCurve:
    """Replace e by a chain through new weight-0 valence-2 vertices; the result skips the stability check."""
    curve, _ = subdivide_edge_with_map(c, e, parts)
    return curve


def subdivide_edge_with_map(c: TropicalCurve, e: str, parts: Sequence) -> tuple[TropicalCurve, dict]:
    """As :func:`subdivide_edge`, also returning how e's cycle coordinate spreads over the chain.

    The map sends e to a list of ``(new edge, sign)``; a cycle with coefficient
    ``a`` on e has coefficient ``a * sign`` on each chain edge.
    """
    g = c.graph
    a, b = g.ends(e)
    parts = [_fraction(p) for p in parts]
    if not parts or any(p <= 0 for p in parts):
        raise ValidationError("parts must be positive")
    if sum(parts) != c.length[e]:
        raise ValidationError(f"parts sum to {sum(parts)}, not to the length {c.length[e]} of {e}")
    if len(parts) == 1:
        return TropicalCurve(g, c.lengths, False), {e: [(e, 1)]}
    m = len(parts)
    new_vs = [f"{e}:{k}" for k in range(1, m)]
    clash = set(new_vs) & set(g.vertices)
    if clash:
        raise ValidationError(f"vertex ids {sorted(clash)} already in use")
    chain = [a] + new_vs + [b]
    new_es = [(f"{e}.{k}", chain[k - 1], chain[k]) for k in range(1, m + 1)]
    edges = []
    lengths = []
    for (x, u, v), ln in zip(g.edges, c.lengths):
        if x == e:
            edges.extend(new_es)
            lengths.extend(parts)
        else:
            edges.append((x, u, v))
            lengths.append(ln)
    graph = WeightedGraph(g.vertices + tuple(new_vs), g.weights + (0,) * len(new_vs), tuple(edges))
    # walk the chain in the direction of e's orientation
    tail, head = orientation(g, e)
    forward = tail == a
    seq = new_es if forward else list(reversed(new_es))
    mapping = []
    for x, u, v in seq:
        come_from = u if forward else v
        mapping.append((x, 1 if orientation(graph, x)[0] == come_from else -1))
    return TropicalCurve(graph, tuple(lengths), False), {e: mapping}


def transport_rows(basis: CycleBasis, edge_map: Mapping[str, list], new_edges: Sequence[str]) -> tuple:
    """Push cycle coefficient rows through a subdivision edge map."""
    col = {x: i for i, x in enumerate(new_edges)}
    out = []
    for r in basis.rows:
        row = [0] * len(new_edges)
        for e, coef in zip(basis.edges, r):
            if not coef:
                continue
            for x, sign in edge_map.get(e, [(e, 1)]):
                row[col[x]] += coef * sign
        out.append(tuple(row))
    return tuple(out)


def width_subdivision(m: NodalModel) -> tuple[TropicalCurve, dict]:
    """Subdivide every edge e into width(e) unit edges; return the unit curve and the edge map."""
    curve = TropicalCurve.build(m.dual, {e: w for e, w in m.width.items()})
    emap: dict[str, list] = {}
    for e, w in m.width.items():
        curve, step = subdivide_edge_with_map(curve, e, [1] * w)
        emap.update(step)
    return curve, emap


def picard_lefschetz_gram(m: NodalModel, basis: CycleBasis | None = None) -> QuadraticForm:
    """Unit-length monodromy Gram of the width-subdivided graph, divided by the extension degree.

    The cycle basis of the dual graph is carried onto the subdivided graph
    through the canonical identification of first homology.
    """
    basis = basis or cycle_basis(m.dual)
    sub, emap = width_subdivision(m)
    edges = sub.graph.edge_ids
    rows = transport_rows(basis, emap, edges)
    g = genus(m.dual)
    d = m.extension_degree
    gram = [[Fraction(0)] * g for _ in range(g)]
    for i in range(len(rows)):
        for j in range(len(rows)):
            gram[i][j] = Fraction(sum(x * y for x, y in zip(rows[i], rows[j])), d)
    return QuadraticForm.from_rows(gram)
