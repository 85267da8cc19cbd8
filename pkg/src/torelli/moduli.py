"""Stratification posets and the tropical Torelli map on strata."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .connectivity import cyclic_label, three_edge_connectivization
from .delaunay import decompositions_equivalent, delaunay_of_graph, refines
from .forms import QuadraticForm, arithmetically_equivalent, graph_form
from .graphs import (
    WeightedGraph,
    contract_edges,
    dominates,
    enumerate_stable_weighted_graphs,
    stratum_label,
)
from .tropical import TropicalCurve, jacobian, tropical_3ec

DELAUNAY_RANK_CAP = 4


@dataclass(frozen=True)
class StrataPoset:
    """Labels with the relation ``(a, b)`` meaning a >= b."""

    elements: tuple[str, ...]
    relations: frozenset
    payload: dict = field(compare=False)
    dimension: dict = field(compare=False)

    def geq(self, a: str, b: str) -> bool:
        return (a, b) in self.relations

    def covering_relations(self) -> list[tuple[str, str]]:
        """Transitive reduction: a > b with nothing strictly between."""
        strict = {(a, b) for a, b in self.relations if a != b}
        out = []
        for a, b in sorted(strict):
            if not any((a, c) in strict and (c, b) in strict for c in self.elements):
                out.append((a, b))
        return out

    def maximal(self) -> list[str]:
        return [a for a in self.elements if not any((b, a) in self.relations for b in self.elements if b != a)]

    def minimal(self) -> list[str]:
        return [a for a in self.elements if not any((a, b) in self.relations for b in self.elements if b != a)]

    def check_axioms(self) -> list[str]:
        problems = []
        for a in self.elements:
            if (a, a) not in self.relations:
                problems.append(f"not reflexive at {a}")
        for a, b in self.relations:
            if a != b and (b, a) in self.relations:
                problems.append(f"not antisymmetric: {a}, {b}")
            for c in self.elements:
                if (b, c) in self.relations and (a, c) not in self.relations:
                    problems.append(f"not transitive: {a} >= {b} >= {c}")
        return problems


def build_mg_poset(genus: int, limit: int | None = None, graphs=None) -> StrataPoset:
    graphs = graphs if graphs is not None else enumerate_stable_weighted_graphs(genus, limit)
    labels = [stratum_label(g) for g in graphs]
    rel = set()
    for (la, ga), (lb, gb) in itertools.product(zip(labels, graphs), repeat=2):
        if dominates(ga, gb):
            rel.add((la, lb))
    return StrataPoset(
        tuple(labels),
        frozenset(rel),
        dict(zip(labels, graphs)),
        {lab: len(g.edges) for lab, g in zip(labels, graphs)},
    )


def image_label(g: WeightedGraph) -> str:
    """Label of the Torelli image stratum: the cyclic class of the 3-edge-connectivization."""
    return cyclic_label(three_edge_connectivization(g))


@dataclass
class StratumMapReport:
    mapping: dict
    cross_checked_pairs: int = 0
    discrepancies: list = field(default_factory=list)


def torelli_stratum_map(genus: int, cross_check: bool | None = None, graphs=None, limit: int | None = None) -> StratumMapReport:
    """Stratum label -> image label, optionally confirmed by Delaunay equivalence of graph forms."""
    graphs = graphs if graphs is not None else enumerate_stable_weighted_graphs(genus, limit)
    labels = [stratum_label(g) for g in graphs]
    images = [image_label(g) for g in graphs]
    report = StratumMapReport(dict(zip(labels, images)))
    if cross_check is None:
        cross_check = genus <= 3
    if cross_check:
        dels = [delaunay_of_graph(g, limit) if g.b1 <= DELAUNAY_RANK_CAP else None for g in graphs]
        for i, j in itertools.combinations(range(len(graphs)), 2):
            if dels[i] is None or dels[j] is None:
                continue
            same = decompositions_equivalent(dels[i], dels[j], limit) is not None
            report.cross_checked_pairs += 1
            if same != (images[i] == images[j]):
                report.discrepancies.append((labels[i], labels[j], same))
    return report


def fiber_label(g: WeightedGraph) -> str:
    """Fiber class of the unit-length curve: tropical 3EC with summed lengths, up to cyclic equivalence."""
    c = tropical_3ec(TropicalCurve.unit(g, check_stable=False))
    return cyclic_label(c.graph, c.length)


@dataclass
class TorelliFiberReport:
    classes: dict  # fiber label -> list of stratum labels
    witnesses: dict  # fiber label -> list of (graph, 3ec graph)
    equivalence_checks: int = 0
    discrepancies: list = field(default_factory=list)

    @property
    def partition(self) -> list[list[str]]:
        return [sorted(v) for _, v in sorted(self.classes.items())]


def torelli_fibers(genus: int, graphs=None, limit: int | None = None, verify: bool = True) -> TorelliFiberReport:
    """Partition unit-length strata by fiber label and confirm it with arithmetic equivalence both ways."""
    graphs = graphs if graphs is not None else enumerate_stable_weighted_graphs(genus, limit)
    classes: dict[str, list[str]] = {}
    wit: dict[str, list] = {}
    forms: dict[str, QuadraticForm] = {}
    reps: dict[str, str] = {}
    for g in graphs:
        key = fiber_label(g)
        lab = stratum_label(g)
        classes.setdefault(key, []).append(lab)
        wit.setdefault(key, []).append((g, three_edge_connectivization(g)))
        forms[lab] = graph_form(g)
        reps.setdefault(key, lab)
    report = TorelliFiberReport(classes, wit)
    if not verify:
        return report
    for key, labs in classes.items():
        for lab in labs[1:]:
            report.equivalence_checks += 1
            if arithmetically_equivalent(forms[reps[key]], forms[lab], limit) is None:
                report.discrepancies.append(("same fiber, inequivalent forms", reps[key], lab))
    keys = sorted(classes)
    for k1, k2 in itertools.combinations(keys, 2):
        report.equivalence_checks += 1
        if arithmetically_equivalent(forms[reps[k1]], forms[reps[k2]], limit) is not None:
            report.discrepancies.append(("different fibers, equivalent forms", reps[k1], reps[k2]))
    return report


@dataclass
class OrderReport:
    pairs_checked: int = 0
    delaunay_checked: int = 0
    violations: list = field(default_factory=list)


def _contracted_image_labels(g3: WeightedGraph) -> frozenset:
    out = set()
    for k in range(len(g3.edges) + 1):
        for sub in itertools.combinations(g3.edge_ids, k):
            out.add(image_label(contract_edges(g3, sub)))
    return frozenset(out)


def check_order_preservation(
    genus: int,
    poset: StrataPoset | None = None,
    delaunay: bool = True,
    sample: int | None = None,
    seed: int = 0,
    limit: int | None = None,
) -> OrderReport:
    """For dominance pairs a >= b, check the image classes are ordered the same way.

    Class order: the image of b is the class of some contraction of the
    3-edge-connectivization of a.  Where ranks permit, the Delaunay paving of
    a must also refine that of b.
    """
    poset = poset or build_mg_poset(genus, limit)
    pairs = sorted(poset.relations)
    if sample is not None and sample < len(pairs):
        pairs = random.Random(seed).sample(pairs, sample)
    report = OrderReport()
    dels: dict[str, object] = {}
    reach: dict[str, frozenset] = {}
    for a, b in pairs:
        ga, gb = poset.payload[a], poset.payload[b]
        report.pairs_checked += 1
        if a not in reach:
            reach[a] = _contracted_image_labels(three_edge_connectivization(ga))
        if image_label(gb) not in reach[a]:
            report.violations.append((a, b, "class order"))
        if delaunay and ga.b1 <= DELAUNAY_RANK_CAP:
            for lab, g in ((a, ga), (b, gb)):
                if lab not in dels:
                    dels[lab] = delaunay_of_graph(g, limit)
            report.delaunay_checked += 1
            if refines(dels[a], dels[b], limit) is None:
                report.violations.append((a, b, "Delaunay refinement"))
    return report


def tropical_torelli(c: TropicalCurve) -> tuple[int, QuadraticForm, str]:
    """Genus, Jacobian form and fiber label of a tropical curve."""
    c3 = tropical_3ec(c)
    return c.genus, jacobian(c), cyclic_label(c3.graph, c3.length)

