import itertools

import pytest

from torelli.forms import arithmetically_equivalent, graph_form
from torelli.graphs import dominates, dumbbell, single_vertex, stratum_label, theta
from torelli.moduli import (
    build_mg_poset,
    check_order_preservation,
    fiber_label,
    image_label,
    torelli_fibers,
    torelli_stratum_map,
)


@pytest.fixture(scope="module")
def poset2():
    return build_mg_poset(2)


@pytest.fixture(scope="module")
def poset3():
    return build_mg_poset(3)


def test_genus2_poset(poset2):
    assert len(poset2.elements) == 7
    assert len(poset2.relations) == 22
    assert set(poset2.maximal()) == {stratum_label(theta()), stratum_label(dumbbell())}
    assert poset2.minimal() == [stratum_label(single_vertex(2))]
    assert poset2.check_axioms() == []


def test_genus3_poset(poset3):
    assert len(poset3.elements) == 42
    assert poset3.check_axioms() == []
    for a, b in poset3.relations:
        if a != b:
            assert poset3.dimension[a] > poset3.dimension[b]


def test_relations_agree_with_domination(poset2):
    for a, b in itertools.product(poset2.elements, repeat=2):
        assert poset2.geq(a, b) == dominates(poset2.payload[a], poset2.payload[b])


def test_covering_relations_generate_the_order(poset2):
    cover = poset2.covering_relations()
    closure = {(a, a) for a in poset2.elements} | set(cover)
    changed = True
    while changed:
        new = {(a, c) for a, b in closure for b2, c in closure if b == b2} - closure
        closure |= new
        changed = bool(new)
    assert closure == set(poset2.relations)


def test_genus2_fibers():
    rep = torelli_fibers(2)
    assert not rep.discrepancies
    assert len(rep.classes) == 4
    assert fiber_label(theta()) != fiber_label(dumbbell())


def test_genus3_fibers(genus3):
    rep = torelli_fibers(3, graphs=genus3)
    assert not rep.discrepancies
    assert len(rep.classes) == 15
    # the partition is exactly the arithmetic classes
    forms = {stratum_label(g): graph_form(g) for g in genus3}
    for cls in rep.partition:
        for a, b in itertools.combinations(cls, 2):
            assert arithmetically_equivalent(forms[a], forms[b]) is not None


def test_stratum_map(genus2):
    rep = torelli_stratum_map(2, cross_check=True, graphs=genus2)
    assert not rep.discrepancies
    assert set(rep.mapping) == {stratum_label(g) for g in genus2}
    assert image_label(theta()) != image_label(dumbbell())


def test_order_preservation_genus2(poset2):
    rep = check_order_preservation(2, poset2)
    assert rep.pairs_checked == 22 and not rep.violations


def test_order_preservation_genus3_sample(poset3):
    rep = check_order_preservation(3, poset3, sample=20, seed=1)
    assert rep.pairs_checked == 20 and not rep.violations
