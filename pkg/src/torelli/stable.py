"""Combinatorial shadow of stable curves: separating blocks, C1-sets, twists and the compactified fiber test.

A curve is modelled by its dual graph together with an opaque label per
vertex standing for the isomorphism class of the normalized component.  The
branch points of a component are not labelled individually; a component
only records how many of them belong to each C1-set.  Two models with equal
shadows are C1-equivalent whenever their labelled normalizations really are
isomorphic, which is taken as given.  The hyperelliptic hypothesis needed
for the canonical image is not checked.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Mapping

from .connectivity import (
    CoparallelPartition,
    TwistSpec,
    bridges,
    coparallel_classes,
    twist,
    twist_specs,
)
from .errors import ComputationalLimitError, ValidationError
from .graphs import WeightedGraph, canonical_key, components, genus, id_key, is_stable, isomorphic

ORBIT_LIMIT = 20_000
MATCH_LIMIT = 2_000_000


@dataclass(frozen=True)
class CurveModel:
    dual: WeightedGraph
    labels: tuple[str, ...]
    check_stable: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if len(self.labels) != len(self.dual.vertices):
            raise ValidationError("one component label per vertex is required")
        if self.check_stable and not is_stable(self.dual):
            raise ValidationError("dual graph is not stable")

    @classmethod
    def build(cls, dual: WeightedGraph, labels: Mapping[str, str] | None = None, check_stable: bool = True) -> "CurveModel":
        labels = labels or {}
        return cls(dual, tuple(str(labels.get(v, "")) for v in dual.vertices), check_stable)

    @property
    def label(self) -> dict[str, str]:
        return dict(zip(self.dual.vertices, self.labels))

    @property
    def genus(self) -> int:
        return genus(self.dual)

    def key(self):
        """Isomorphism-invariant key of the labelled dual graph."""
        return canonical_key(self.dual, self.labels)


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[CurveModel, ...]
    bridge_count: int

    @property
    def positive_genus_blocks(self) -> tuple[CurveModel, ...]:
        return tuple(b for b in self.blocks if b.genus > 0)


def separating_blocks(x: CurveModel) -> BlockDecomposition:
    g = x.dual
    br = bridges(g)
    rest = g.without_edges(br)
    lab = x.label
    blocks = []
    for comp in sorted(components(g.vertices, rest), key=lambda c: min(id_key(v) for v in c)):
        cs = set(comp)
        vs = tuple(v for v in g.vertices if v in cs)
        sub = WeightedGraph(
            vs,
            tuple(g.weight[v] for v in vs),
            tuple(e for e in rest if e[1] in cs),
        )
        blocks.append(CurveModel(sub, tuple(lab[v] for v in vs), check_stable=False))
    return BlockDecomposition(tuple(blocks), len(br))


def _require_bridgeless(x: CurveModel):
    if bridges(x.dual):
        raise ValidationError("the dual graph has separating edges")


def stabilize_block(b: CurveModel, order=None) -> CurveModel:
    """Contract exceptional components: smooth weight-0 valence-2 vertices until none remain.

    ``order`` (a key on vertex ids) only changes which vertex is smoothed
    first; the result does not depend on it.
    """
    _require_bridgeless(b)
    if b.genus == 0:
        raise ValidationError("genus-0 blocks have no stable model")
    g = b.dual
    lab = b.label
    while True:
        cands = [v for v in g.vertices if g.weight[v] == 0 and g.valence(v) == 2
                 and sum(v in (e[1], e[2]) for e in g.edges) == 2]
        if not cands:
            break
        v = min(cands, key=order or id_key)
        (e, a1, b1), (f, a2, b2) = [x for x in g.edges if v in (x[1], x[2])]
        u = b1 if a1 == v else a1
        w = b2 if a2 == v else a2
        keep, drop = sorted((e, f), key=id_key)
        edges = tuple((keep, u, w) if x[0] == keep else x for x in g.edges if x[0] != drop)
        vs = tuple(x for x in g.vertices if x != v)
        g = WeightedGraph(vs, tuple(g.weight[x] for x in vs), edges)
    return CurveModel(g, tuple(lab[v] for v in g.vertices), check_stable=False)


def c1_sets(x: CurveModel) -> CoparallelPartition:
    _require_bridgeless(x)
    return coparallel_classes(x.dual)


def _c1_profile(x: CurveModel, part: CoparallelPartition) -> list[tuple[frozenset, dict]]:
    """Each C1-set with its number of branch points on every component."""
    out = []
    for s in part.classes:
        cnt: Counter = Counter()
        for e in s:
            a, b = x.dual.ends(e)
            cnt[a] += 1
            cnt[b] += 1
        out.append((s, dict(cnt)))
    return out


@dataclass(frozen=True)
class C1Witness:
    vertex_map: dict
    c1_map: dict  # frozenset of edges of x1 -> frozenset of edges of x2

    def __hash__(self):
        return hash(tuple(sorted(self.vertex_map.items())))


def _vertex_classes(x: CurveModel):
    cls: dict[tuple, list[str]] = {}
    for v, w, lab in zip(x.dual.vertices, x.dual.weights, x.labels):
        cls.setdefault((lab, w), []).append(v)
    return cls


def c1_equivalent(x1: CurveModel, x2: CurveModel, limit: int | None = None) -> C1Witness | None:
    """A label- and weight-preserving component bijection with a matching bijection of C1-sets."""
    _require_bridgeless(x1)
    _require_bridgeless(x2)
    limit = MATCH_LIMIT if limit is None else limit
    p1 = _c1_profile(x1, coparallel_classes(x1.dual))
    p2 = _c1_profile(x2, coparallel_classes(x2.dual))
    if len(p1) != len(p2) or sorted(len(s) for s, _ in p1) != sorted(len(s) for s, _ in p2):
        return None
    c1, c2 = _vertex_classes(x1), _vertex_classes(x2)
    if {k: len(v) for k, v in c1.items()} != {k: len(v) for k, v in c2.items()}:
        return None
    keys = sorted(c1)
    src = [v for k in keys for v in c1[k]]
    count = 0
    for combo in itertools.product(*(itertools.permutations(c2[k]) for k in keys)):
        count += 1
        if count > limit:
            raise ComputationalLimitError("C1-equivalence search", limit)
        phi = dict(zip(src, [v for part in combo for v in part]))
        index2: dict[tuple, list[frozenset]] = {}
        for s, cnt in p2:
            index2.setdefault((len(s), tuple(sorted(cnt.items()))), []).append(s)
        psi = {}
        for s, cnt in p1:
            k = (len(s), tuple(sorted((phi[v], c) for v, c in cnt.items())))
            bucket = index2.get(k)
            if not bucket:
                break
            psi[s] = bucket.pop()
        else:
            return C1Witness(phi, psi)
    return None


def twist_equivalent(x1: CurveModel, x2: CurveModel, limit: int | None = None) -> list[TwistSpec] | None:
    """Shortest sequence of twists taking x1 to a model isomorphic to x2, or None."""
    _require_bridgeless(x1)
    _require_bridgeless(x2)
    limit = ORBIT_LIMIT if limit is None else limit
    target = x2.key()
    start = x1.dual
    labels = x1.labels  # twists keep vertices, so labels stay aligned
    seen = {canonical_key(start, labels): None}
    queue = deque([(start, [])])
    while queue:
        g, path = queue.popleft()
        if canonical_key(g, labels) == target:
            assert isomorphic(g, x2.dual, labels, x2.labels) is not None
            return path
        for spec in twist_specs(g):
            h = twist(g, spec)
            k = canonical_key(h, labels)
            if k in seen:
                continue
            seen[k] = None
            if len(seen) > limit:
                raise ComputationalLimitError("twist orbit", limit)
            queue.append((h, path + [spec]))
    return None


def apply_twists(x: CurveModel, moves) -> CurveModel:
    g = x.dual
    for spec in moves:
        g = twist(g, spec)
    return CurveModel(g, x.labels, check_stable=False)


@dataclass
class FiberComparison:
    equal: bool
    reason: str
    matching: list = field(default_factory=list)  # (block index in x1, block index in x2)
    blocks1: tuple = ()
    blocks2: tuple = ()


def stabilized_blocks(x: CurveModel) -> tuple[CurveModel, ...]:
    return tuple(stabilize_block(b) for b in separating_blocks(x).positive_genus_blocks)


def compactified_fiber_equal(x1: CurveModel, x2: CurveModel, limit: int | None = None) -> FiberComparison:
    if x1.genus != x2.genus:
        raise ValidationError("models have different genus")
    b1, b2 = stabilized_blocks(x1), stabilized_blocks(x2)
    if len(b1) != len(b2):
        return FiberComparison(False, f"{len(b1)} vs {len(b2)} positive-genus blocks", [], b1, b2)
    used: set[int] = set()
    match: list[tuple[int, int]] = []

    def rec(i):
        if i == len(b1):
            return True
        for j, y in enumerate(b2):
            if j in used or y.genus != b1[i].genus:
                continue
            if c1_equivalent(b1[i], y, limit) is not None:
                used.add(j)
                match.append((i, j))
                if rec(i + 1):
                    return True
                used.discard(j)
                match.pop()
        return False

    if rec(0):
        return FiberComparison(True, "blocks match up to C1-equivalence", list(match), b1, b2)
    return FiberComparison(False, "no C1-equivalent matching of blocks", [], b1, b2)


@dataclass(frozen=True)
class SingularPoint:
    c1_set: frozenset
    multiplicity: int
    branches: tuple[tuple[str, int], ...]  # (component, number of branches on it)


@dataclass(frozen=True)
class CanonicalImage:
    components: tuple[tuple[str, str, int], ...]  # (vertex, label, weight)
    points: tuple[SingularPoint, ...]

    def invariant(self):
        """Isomorphism invariant computed by exhaustive minimisation over component orderings."""
        cls: dict[tuple, list[str]] = {}
        for v, lab, w in self.components:
            cls.setdefault((lab, w), []).append(v)
        keys = sorted(cls)
        best = None
        for combo in itertools.product(*(itertools.permutations(cls[k]) for k in keys)):
            pos = {v: i for i, v in enumerate(v for part in combo for v in part)}
            enc = tuple(sorted(
                (p.multiplicity, tuple(sorted((pos[v], c) for v, c in p.branches))) for p in self.points
            ))
            if best is None or enc < best:
                best = enc
        return (tuple((k, len(cls[k])) for k in keys), best)


def canonical_image(x: CurveModel) -> CanonicalImage:
    """One point per C1-set, of multiplicity 2|S|, glued to the components carrying its branches."""
    part = c1_sets(x)
    pts = []
    for s, cnt in _c1_profile(x, part):
        pts.append(SingularPoint(s, 2 * len(s), tuple(sorted(cnt.items(), key=lambda t: id_key(t[0])))))
    comps = tuple(zip(x.dual.vertices, x.labels, x.dual.weights))
    return CanonicalImage(comps, tuple(pts))


def images_isomorphic(a: CanonicalImage, b: CanonicalImage) -> bool:
    return a.invariant() == b.invariant()


def bridgeless_multigraphs(max_edges: int, betti: int | None = None) -> list[WeightedGraph]:
    """Connected bridge-free multigraphs (weights 0, loops allowed) with at most ``max_edges`` edges, up to isomorphism."""
    out = {}
    for n in range(1, max_edges + 1):
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        for m in range(n if n > 1 else 0, max_edges + 1):
            if betti is not None and m - n + 1 != betti:
                continue
            for combo in itertools.combinations_with_replacement(pairs, m):
                deg = [0] * n
                for i, j in combo:
                    deg[i] += 1
                    deg[j] += 1
                if n > 1 and min(deg) < 2:
                    continue
                vs = tuple(f"v{i}" for i in range(n))
                es = tuple((f"e{k}", f"v{i}", f"v{j}") for k, (i, j) in enumerate(combo))
                g = WeightedGraph(vs, (0,) * n, es, check_connected=False)
                if not _connected_graph(g) or bridges(g):
                    continue
                out.setdefault(canonical_key(g), WeightedGraph(vs, (0,) * n, es))
    return [out[k] for k in sorted(out, key=repr)]


def _connected_graph(g: WeightedGraph) -> bool:
    return len(components(g.vertices, g.edges)) == 1


def labelled_models(graphs, alphabet) -> list[CurveModel]:
    """Every labelling of every graph by the alphabet, up to labelled isomorphism."""
    out = []
    for g in graphs:
        seen = set()
        for labs in itertools.product(alphabet, repeat=len(g.vertices)):
            x = CurveModel(g, tuple(labs), check_stable=False)
            k = x.key()
            if k not in seen:
                seen.add(k)
                out.append(x)
    return out
