"""Reproducible invariant batteries behind ``torelli check``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg as la
from .forms import graph_form
from .graphs import WeightedGraph, enumerate_stable_weighted_graphs, stratum_label
from .moduli import build_mg_poset, check_order_preservation, torelli_fibers, torelli_stratum_map
from .stable import CurveModel, bridgeless_multigraphs, c1_equivalent, labelled_models, twist_equivalent


@dataclass
class SuiteResult:
    suite: str
    genus: int
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def kirchhoff_tree_count(g: WeightedGraph) -> int:
    """Spanning trees via a reduced Laplacian minor (loops ignored)."""
    n = len(g.vertices)
    if n == 1:
        return 1
    idx = {v: i for i, v in enumerate(g.vertices)}
    lap = la.zeros(n, n)
    for _, a, b in g.edges:
        if a == b:
            continue
        i, j = idx[a], idx[b]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    return int(la.det([row[1:] for row in lap[1:]]))


def matrix_tree_suite(genus: int, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("matrix-tree", genus)
    for g in enumerate_stable_weighted_graphs(genus, limit):
        q = graph_form(g)
        b = g.b1
        block = [row[:b] for row in q.gram[:b]]
        res.checked += 1
        if la.det(block) != kirchhoff_tree_count(g):
            res.failures.append(stratum_label(g))
    return res


def fibers_suite(genus: int, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("fibers", genus)
    graphs = enumerate_stable_weighted_graphs(genus, limit)
    rep = torelli_fibers(genus, graphs=graphs, limit=limit)
    res.checked += rep.equivalence_checks
    res.failures.extend(rep.discrepancies)
    smap = torelli_stratum_map(genus, graphs=graphs, limit=limit)
    res.checked += smap.cross_checked_pairs
    res.failures.extend(smap.discrepancies)
    return res


def duality_suite(genus: int, limit: int | None = None, sample: int | None = None) -> SuiteResult:
    res = SuiteResult("duality", genus)
    poset = build_mg_poset(genus, limit)
    res.failures.extend(poset.check_axioms())
    for a, b in poset.relations:
        if a != b and poset.dimension[a] <= poset.dimension[b]:
            res.failures.append((a, b, "dimension not strictly decreasing"))
    rep = check_order_preservation(genus, poset, sample=sample, limit=limit)
    res.checked += rep.pairs_checked
    res.failures.extend(rep.violations)
    return res


def c1_twist_suite(genus: int, limit: int | None = None, alphabet=("A", "B")) -> SuiteResult:
    """c1_equivalent against twist_equivalent on labelled bridge-free models of first Betti number ``genus``.

    The family is every connected bridge-free multigraph with at most
    ``2 * genus`` edges, labelled by the alphabet up to isomorphism.
    """
    res = SuiteResult("c1-twist", genus)
    models = labelled_models(bridgeless_multigraphs(2 * genus, betti=genus), alphabet)
    buckets: dict[tuple, list[CurveModel]] = {}
    for x in models:
        sig = (len(x.dual.vertices), len(x.dual.edges), tuple(sorted(x.labels)))
        buckets.setdefault(sig, []).append(x)
    for xs in buckets.values():
        for x1, x2 in itertools.combinations(xs, 2):
            res.checked += 1
            a = c1_equivalent(x1, x2, limit) is not None
            b = twist_equivalent(x1, x2, limit) is not None
            if a != b:
                res.failures.append((str(x1.dual), x1.labels, str(x2.dual), x2.labels, a, b))
    return res


SUITES = {
    "matrix-tree": matrix_tree_suite,
    "fibers": fibers_suite,
    "duality": duality_suite,
    "c1-twist": c1_twist_suite,
}
