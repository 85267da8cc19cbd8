"""Weighted multigraphs: stability, genus, contraction, isomorphism, enumeration.

A weighted graph is a connected multigraph (loops and parallel edges
allowed) with a nonnegative integer weight on each vertex.  Vertex and edge
ids are opaque strings.  Loops count twice towards the valence of their
vertex.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import ComputationalLimitError, ValidationError

_NUM = re.compile(r"(\d+)")


def id_key(s: str):
    """Natural sort key so that ``v2 < v10``."""
    return tuple((0, int(t)) if t.isdigit() else (1, t) for t in _NUM.split(s) if t)


@dataclass(frozen=True)
class WeightedGraph:
    vertices: tuple[str, ...]
    weights: tuple[int, ...]
    edges: tuple[tuple[str, str, str], ...]  # (edge id, end, end)
    check_connected: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if len(self.vertices) != len(self.weights):
            raise ValidationError("vertices and weights differ in length")
        if not self.vertices:
            raise ValidationError("a weighted graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex id")
        for w in self.weights:
            if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                raise ValidationError(f"weight {w!r} is not a nonnegative integer")
        ids = [e[0] for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate edge id")
        vs = set(self.vertices)
        for e, a, b in self.edges:
            if a not in vs or b not in vs:
                raise ValidationError(f"edge {e} references an unknown vertex")
        if self.check_connected and not _connected(self.vertices, self.edges):
            raise ValidationError("graph is not connected")

    @classmethod
    def build(cls, weights: Mapping[str, int] | Sequence[tuple[str, int]], edges: Iterable) -> "WeightedGraph":
        """Build from ``{vertex: weight}`` and edges given as ``(id, u, v)`` or ``(u, v)``."""
        items = list(weights.items()) if isinstance(weights, Mapping) else list(weights)
        es = []
        for i, e in enumerate(edges):
            if len(e) == 2:
                es.append((f"e{i}", str(e[0]), str(e[1])))
            else:
                es.append((str(e[0]), str(e[1]), str(e[2])))
        return cls(tuple(str(v) for v, _ in items), tuple(w for _, w in items), tuple(es))

    @property
    def weight(self) -> dict[str, int]:
        return dict(zip(self.vertices, self.weights))

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e[0] for e in self.edges)

    def ends(self, e: str) -> tuple[str, str]:
        for eid, a, b in self.edges:
            if eid == e:
                return a, b
        raise ValidationError(f"unknown edge {e!r}")

    def is_loop(self, e: str) -> bool:
        a, b = self.ends(e)
        return a == b

    def valence(self, v: str) -> int:
        return sum((a == v) + (b == v) for _, a, b in self.edges)

    @property
    def b1(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def without_edges(self, removed: Iterable[str]) -> tuple[tuple[str, str, str], ...]:
        removed = set(removed)
        return tuple(e for e in self.edges if e[0] not in removed)

    def relabel(self, vmap: Mapping[str, str], emap: Mapping[str, str] | None = None) -> "WeightedGraph":
        emap = emap or {}
        return WeightedGraph(
            tuple(vmap.get(v, v) for v in self.vertices),
            self.weights,
            tuple((emap.get(e, e), vmap.get(a, a), vmap.get(b, b)) for e, a, b in self.edges),
        )

    def __str__(self):
        vs = ",".join(f"{v}:{w}" for v, w in zip(self.vertices, self.weights))
        es = ",".join(f"{e}={a}-{b}" for e, a, b in self.edges)
        return f"WeightedGraph([{vs}] [{es}])"


@dataclass(frozen=True)
class GraphMorphismData:
    vertex_map: dict
    edge_map: dict

    def __hash__(self):
        return hash((tuple(sorted(self.vertex_map.items())), tuple(sorted(self.edge_map.items()))))

    def verify(self, g1: WeightedGraph, g2: WeightedGraph) -> bool:
        """Check this is a weight-preserving isomorphism g1 -> g2."""
        vm, em = self.vertex_map, self.edge_map
        if sorted(vm) != sorted(g1.vertices) or sorted(vm.values()) != sorted(g2.vertices):
            return False
        if sorted(em) != sorted(g1.edge_ids) or sorted(em.values()) != sorted(g2.edge_ids):
            return False
        w1, w2 = g1.weight, g2.weight
        if any(w1[v] != w2[vm[v]] for v in g1.vertices):
            return False
        for e, a, b in g1.edges:
            if sorted((vm[a], vm[b])) != sorted(g2.ends(em[e])):
                return False
        return True


def _connected(vertices, edges) -> bool:
    if not vertices:
        return True
    adj: dict[str, set] = {v: set() for v in vertices}
    for _, a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def components(vertices, edges) -> list[list[str]]:
    """Connected components (vertex lists, in input order) of a possibly disconnected graph."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for _, a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[str, list[str]] = {}
    for v in vertices:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def genus(g: WeightedGraph) -> int:
    return g.b1 + g.total_weight


def is_stable(g: WeightedGraph) -> bool:
    w = g.weight
    return all(g.valence(v) >= 3 for v in g.vertices if w[v] == 0)


def contract_edges(g: WeightedGraph, edges: Iterable[str]) -> WeightedGraph:
    """Contract a set of edges at once.

    Each connected piece of the contracted subgraph becomes one vertex whose
    weight is the total weight of the piece plus its first Betti number, which
    is what repeated application of the two contraction rules produces.
    """
    s = set(edges)
    unknown = s - set(g.edge_ids)
    if unknown:
        raise ValidationError(f"unknown edge(s) {sorted(unknown)}")
    sub = [e for e in g.edges if e[0] in s]
    comps = components(g.vertices, sub)
    rep = {}
    weight = {}
    w = g.weight
    for comp in comps:
        r = min(comp, key=id_key)
        members = set(comp)
        inner = sum(1 for _, a, b in sub if a in members)
        for v in comp:
            rep[v] = r
        weight[r] = sum(w[v] for v in comp) + inner - len(comp) + 1
    verts = tuple(v for v in g.vertices if rep[v] == v)
    return WeightedGraph(
        verts,
        tuple(weight[v] for v in verts),
        tuple((e, rep[a], rep[b]) for e, a, b in g.edges if e not in s),
    )


def contract_edge(g: WeightedGraph, e: str) -> WeightedGraph:
    g.ends(e)
    return contract_edges(g, [e])


# -- canonical form ---------------------------------------------------------


def _refine(n, colors, adj):
    """Colour refinement on an n-vertex multigraph; adj[i][j] = multiplicity."""
    cur = list(colors)
    while True:
        sig = [
            (cur[i], tuple(sorted((adj[i][j], cur[j]) for j in range(n) if j != i and adj[i][j])))
            for i in range(n)
        ]
        ranks = {s: k for k, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(cur)):
            return new
        cur = new


def _orderings(cells, limit):
    total = 1
    for c in cells:
        for k in range(2, len(c) + 1):
            total *= k
    if total > limit:
        raise ComputationalLimitError("canonical labelling orderings", limit)
    for combo in itertools.product(*(itertools.permutations(c) for c in cells)):
        yield [v for part in combo for v in part]


ORDERING_LIMIT = 2_000_000


@lru_cache(maxsize=65536)
def canonical_form(g: WeightedGraph, labels: tuple | None = None):
    """Canonical encoding of a (vertex-labelled) weighted graph.

    Returns ``(key, order)``; two graphs are isomorphic (preserving weights and
    labels) iff their keys agree, and ``order`` lists vertex ids in canonical
    position.  ``labels`` is an optional tuple aligned with ``g.vertices``.
    """
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    adj = [[0] * n for _ in range(n)]
    for _, a, b in g.edges:
        i, j = idx[a], idx[b]
        adj[i][j] += 1
        if i != j:
            adj[j][i] += 1
    lab = labels if labels is not None else ("",) * n
    base = [(g.weights[i], str(lab[i]), adj[i][i], sum(adj[i]) + adj[i][i]) for i in range(n)]
    ranks = {s: k for k, s in enumerate(sorted(set(base)))}
    colors = _refine(n, [ranks[s] for s in base], adj)
    by_color: dict[int, list[int]] = {}
    for i, c in enumerate(colors):
        by_color.setdefault(c, []).append(i)
    cells = [by_color[c] for c in sorted(by_color)]
    head = tuple(base[i][:2] for i in sorted(range(n), key=lambda i: colors[i]))
    best = None
    best_order = None
    for order in _orderings(cells, ORDERING_LIMIT):
        pos = {v: k for k, v in enumerate(order)}
        enc = tuple(sorted(
            (min(pos[i], pos[j]), max(pos[i], pos[j]), adj[i][j])
            for i in range(n) for j in range(i, n) if adj[i][j]
        ))
        if best is None or enc < best:
            best, best_order = enc, order
    key = (head, best)
    return key, tuple(g.vertices[i] for i in best_order)


def canonical_key(g: WeightedGraph, labels: tuple | None = None):
    return canonical_form(g, labels)[0]


def canonical_relabel(g: WeightedGraph) -> WeightedGraph:
    """The canonical representative: vertices v0.., edges e0.. in canonical order."""
    _, order = canonical_form(g)
    pos = {v: i for i, v in enumerate(order)}
    w = g.weight
    edges = sorted(
        (min(pos[a], pos[b]), max(pos[a], pos[b])) for _, a, b in g.edges
    )
    return WeightedGraph(
        tuple(f"v{i}" for i in range(len(order))),
        tuple(w[v] for v in order),
        tuple((f"e{k}", f"v{i}", f"v{j}") for k, (i, j) in enumerate(edges)),
    )


def stratum_label(g: WeightedGraph) -> str:
    """Human-readable canonical label, e.g. ``w=0,0|e=00,01,11``."""
    c = canonical_relabel(g)
    ws = ",".join(str(w) for w in c.weights)
    es = ",".join(f"{a[1:]}{b[1:]}" if len(c.vertices) <= 10 else f"{a[1:]}.{b[1:]}" for _, a, b in c.edges)
    return f"w={ws}|e={es}"


def _edge_groups(g: WeightedGraph, vpos=None):
    groups: dict[tuple, list[str]] = {}
    for e, a, b in g.edges:
        k = tuple(sorted((a, b), key=(lambda v: vpos[v]) if vpos else id_key))
        groups.setdefault(k, []).append(e)
    for k in groups:
        groups[k].sort(key=id_key)
    return groups


def isomorphic(g1: WeightedGraph, g2: WeightedGraph, labels1=None, labels2=None) -> GraphMorphismData | None:
    """A weight- (and label-) preserving isomorphism, or None."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    k1, o1 = canonical_form(g1, labels1)
    k2, o2 = canonical_form(g2, labels2)
    if k1 != k2:
        return None
    vmap = dict(zip(o1, o2))
    groups2 = _edge_groups(g2)
    emap = {}
    for (a, b), es in _edge_groups(g1).items():
        target = tuple(sorted((vmap[a], vmap[b]), key=id_key))
        for e, f in zip(es, groups2[target]):
            emap[e] = f
    iso = GraphMorphismData(vmap, emap)
    assert iso.verify(g1, g2)
    return iso


def automorphism_group(g: WeightedGraph) -> list[GraphMorphismData]:
    """All pairs (vertex permutation, edge permutation) preserving weights and incidence."""
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    adj = [[0] * n for _ in range(n)]
    for _, a, b in g.edges:
        i, j = idx[a], idx[b]
        adj[i][j] += 1
        if i != j:
            adj[j][i] += 1
    base = [(g.weights[i], adj[i][i], sum(adj[i]) + adj[i][i]) for i in range(n)]
    ranks = {s: k for k, s in enumerate(sorted(set(base)))}
    colors = _refine(n, [ranks[s] for s in base], adj)
    cells: dict[int, list[int]] = {}
    for i, c in enumerate(colors):
        cells.setdefault(c, []).append(i)
    cell_list = [cells[c] for c in sorted(cells)]
    groups = _edge_groups(g)
    out = []
    for order in _orderings(cell_list, ORDERING_LIMIT):
        source = [i for c in cell_list for i in c]
        sigma = dict(zip(source, order))
        if any(adj[i][j] != adj[sigma[i]][sigma[j]] for i in range(n) for j in range(n)):
            continue
        vmap = {g.vertices[i]: g.vertices[sigma[i]] for i in range(n)}
        keys = sorted(groups, key=lambda k: (id_key(k[0]), id_key(k[1])))
        choices = []
        for k in keys:
            target = tuple(sorted((vmap[k[0]], vmap[k[1]]), key=id_key))
            choices.append([(groups[k], perm) for perm in itertools.permutations(groups[target])])
        for combo in itertools.product(*choices):
            emap = {}
            for src, dst in combo:
                emap.update(zip(src, dst))
            out.append(GraphMorphismData(vmap, emap))
    return out


# -- domination -------------------------------------------------------------


@lru_cache(maxsize=4096)
def _contraction_keys(g: WeightedGraph) -> frozenset:
    keys = set()
    ids = g.edge_ids
    for k in range(len(ids) + 1):
        for sub in itertools.combinations(ids, k):
            keys.add(canonical_key(contract_edges(g, sub)))
    return frozenset(keys)


def dominates(g1: WeightedGraph, g2: WeightedGraph) -> bool:
    """True iff contracting some edges of g1 gives a graph isomorphic to g2."""
    if genus(g1) != genus(g2) or len(g1.edges) < len(g2.edges):
        return False
    return canonical_key(g2) in _contraction_keys(g1)


def contraction_witness(g1: WeightedGraph, g2: WeightedGraph) -> tuple[str, ...] | None:
    """A set of edges of g1 whose contraction is isomorphic to g2, if any."""
    if genus(g1) != genus(g2):
        return None
    k = len(g1.edges) - len(g2.edges)
    if k < 0:
        return None
    target = canonical_key(g2)
    for sub in itertools.combinations(g1.edge_ids, k):
        if canonical_key(contract_edges(g1, sub)) == target:
            return sub
    return None


# -- enumeration ------------------------------------------------------------

ENUMERATION_LIMIT = 20_000_000


def _weight_vectors(total, n):
    """Nonincreasing n-tuples of nonnegative ints summing to total."""

    def rec(rem, k, cap):
        if k == 0:
            if rem == 0:
                yield ()
            return
        for x in range(min(rem, cap), -1, -1):
            if x * k < rem:
                break
            for rest in rec(rem - x, k - 1, x):
                yield (x,) + rest

    yield from rec(total, n, total)


def _degree_sequences(weights, two_e):
    n = len(weights)
    mins = [3 if w == 0 else (1 if n > 1 else 0) for w in weights]

    def rec(i, rem, prev):
        if i == n:
            if rem == 0:
                yield ()
            return
        tail_min = sum(mins[i + 1:])
        hi = rem - tail_min
        if i > 0 and weights[i] == weights[i - 1]:
            hi = min(hi, prev)
        for d in range(mins[i], hi + 1):
            for rest in rec(i + 1, rem - d, d):
                yield (d,) + rest

    yield from rec(0, two_e, None)


def _realizations(degrees):
    """Multigraphs with loops realizing a degree sequence, as {(i, j): mult} (i <= j)."""
    n = len(degrees)

    def rec(i, res, acc):
        if i == n:
            yield dict(acc)
            return
        need = res[i]
        # loops at i, then multiplicities towards later vertices
        for loops in range(need // 2, -1, -1):
            left = need - 2 * loops
            later_cap = sum(res[i + 1:])
            if left > later_cap:
                break
            for dist in _distribute(left, res, i + 1):
                new = list(res)
                new[i] = 0
                items = []
                if loops:
                    items.append(((i, i), loops))
                for j, m in dist:
                    new[j] -= m
                    items.append(((i, j), m))
                yield from rec(i + 1, new, acc + items)

    yield from rec(0, list(degrees), [])


def _distribute(total, res, start):
    n = len(res)

    def rec(j, rem):
        if rem == 0:
            yield []
            return
        if j == n:
            return
        if sum(res[j:]) < rem:
            return
        for m in range(min(rem, res[j]), -1, -1):
            for rest in rec(j + 1, rem - m):
                yield ([(j, m)] if m else []) + rest

    yield from rec(start, total)


def enumerate_stable_weighted_graphs(genus_: int, limit: int | None = None) -> list[WeightedGraph]:
    """One canonical representative per isomorphism class of stable weighted graphs of the genus.

    Ordered by number of edges, then vertices, then canonical key.  Uses the
    bounds |V| <= 2g-2 and |E| <= 3g-3, which follow from stability:
    2|E| >= 3 #{weight-0 vertices}.
    """
    if not isinstance(genus_, int) or genus_ < 2:
        raise ValidationError("genus must be an integer >= 2")
    limit = ENUMERATION_LIMIT if limit is None else limit
    g = genus_
    seen = {}
    examined = 0
    for n in range(1, 2 * g - 1):
        for n_edges in range(n - 1, 3 * g - 2):
            b1 = n_edges - n + 1
            if b1 > g:
                break
            for weights in _weight_vectors(g - b1, n):
                for degrees in _degree_sequences(weights, 2 * n_edges):
                    for mult in _realizations(degrees):
                        examined += 1
                        if examined > limit:
                            raise ComputationalLimitError("stable graph enumeration", limit)
                        edges = []
                        for (i, j), m in sorted(mult.items()):
                            edges.extend([(i, j)] * m)
                        verts = tuple(f"v{i}" for i in range(n))
                        es = tuple((f"e{k}", f"v{i}", f"v{j}") for k, (i, j) in enumerate(edges))
                        if not _connected(verts, es):
                            continue
                        cand = WeightedGraph(verts, weights, es)
                        key = canonical_key(cand)
                        if key not in seen:
                            seen[key] = canonical_relabel(cand)
    out = list(seen.values())
    out.sort(key=lambda x: (len(x.edges), len(x.vertices), canonical_key(x)))
    return out


# -- small named graphs used throughout docs and tests ----------------------


def theta(weights=(0, 0)) -> WeightedGraph:
    return WeightedGraph.build({"u": weights[0], "v": weights[1]}, [("e1", "u", "v"), ("e2", "u", "v"), ("e3", "u", "v")])


def dumbbell(weights=(0, 0)) -> WeightedGraph:
    return WeightedGraph.build(
        {"u": weights[0], "v": weights[1]}, [("a", "u", "u"), ("b", "u", "v"), ("c", "v", "v")]
    )


def rose(loops: int, weight: int = 0) -> WeightedGraph:
    return WeightedGraph.build({"v": weight}, [(f"l{i + 1}", "v", "v") for i in range(loops)])


def single_vertex(weight: int) -> WeightedGraph:
    return WeightedGraph.build({"v": weight}, [])


def cycle_graph(n: int, weights=None) -> WeightedGraph:
    weights = weights or (0,) * n
    vs = {f"v{i}": weights[i] for i in range(n)}
    return WeightedGraph.build(vs, [(f"e{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)])


def complete_graph(n: int) -> WeightedGraph:
    vs = {f"v{i}": 0 for i in range(n)}
    es = [(f"e{i}{j}", f"v{i}", f"v{j}") for i, j in itertools.combinations(range(n), 2)]
    return WeightedGraph.build(vs, es)
