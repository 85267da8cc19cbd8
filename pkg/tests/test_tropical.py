from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from builders import random_lengths, stable_graphs
from torelli.errors import ValidationError
from torelli.forms import arithmetically_equivalent
from torelli.graphs import dumbbell, genus, theta, cycle_graph, WeightedGraph
from torelli.moduli import tropical_torelli
from torelli.tropical import (
    NodalModel,
    TropicalCurve,
    cycle_basis,
    jacobian,
    picard_lefschetz_gram,
    subdivide_edge,
    tropical_3ec,
    tropical_cyclically_equivalent,
    tropicalize,
)


def test_theta_jacobian():
    assert [list(r) for r in jacobian(TropicalCurve.unit(theta())).gram] == [[2, -1], [-1, 2]]


def test_dumbbell_jacobian_ignores_bridge():
    c = TropicalCurve.build(dumbbell(), {"a": 2, "b": 7, "c": 3})
    q = jacobian(c)
    assert sorted([q.gram[0][0], q.gram[1][1]]) == [2, 3] and q.gram[0][1] == 0


def test_weights_give_null_directions():
    g = WeightedGraph(("v",), (1,), (("l", "v", "v"),))
    q = jacobian(TropicalCurve.build(g, {"l": 5}))
    assert q.dim == 2 and q.rank == 1


def test_lengths_validated():
    with pytest.raises(ValidationError):
        TropicalCurve.build(theta(), {"e1": 1, "e2": 0, "e3": 1})
    with pytest.raises(ValidationError):
        TropicalCurve.build(theta(), {"e1": 1, "e2": 1})


def test_model_validation():
    with pytest.raises(ValidationError):
        NodalModel.build(theta(), {"e1": 1, "e2": 0, "e3": 1})
    with pytest.raises(ValidationError):
        NodalModel.build(theta(), {"e1": 1, "e2": 1, "e3": 1}, 0)


def test_tropicalize_divides_by_degree():
    m = NodalModel.build(theta(), {"e1": 2, "e2": 3, "e3": 4}, 2)
    assert tropicalize(m).length == {"e1": 1, "e2": Fraction(3, 2), "e3": 2}


def test_3ec_sums_lengths_on_a_cycle():
    g = WeightedGraph(("a", "b", "c"), (1, 1, 1), (("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")))
    c = tropical_3ec(TropicalCurve.build(g, {"x": 1, "y": 2, "z": 3}))
    assert len(c.graph.vertices) == 1 and list(c.length.values()) == [6]
    assert c.graph.weights == (3,)


def test_subdivision_rejects_bad_parts():
    c = TropicalCurve.unit(theta())
    with pytest.raises(ValidationError):
        subdivide_edge(c, "e1", [Fraction(1, 2), Fraction(1, 3)])


def test_torelli_of_curve():
    g, q, label = tropical_torelli(TropicalCurve.unit(theta()))
    assert g == 2 and q.det() == 3 and isinstance(label, str)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.randoms(use_true_random=False))
def test_picard_lefschetz_random(gen, rng):
    g = rng.choice(stable_graphs(gen))
    m = NodalModel.build(g, {e: rng.randint(1, 5) for e in g.edge_ids}, rng.randint(1, 4))
    assert jacobian(tropicalize(m)).gram == picard_lefschetz_gram(m).gram


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 41), st.randoms(use_true_random=False))
def test_3ec_preserves_jacobian_class(i, rng):
    g = stable_graphs(3)[i]
    c = TropicalCurve.build(g, random_lengths(rng, g))
    q1, q2 = jacobian(c), jacobian(tropical_3ec(c))
    assert arithmetically_equivalent(q1, q2) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 41), st.randoms(use_true_random=False))
def test_cyclic_equivalence_of_lengths_is_reflexive(i, rng):
    g = stable_graphs(3)[i]
    c = TropicalCurve.build(g, random_lengths(rng, g))
    assert tropical_cyclically_equivalent(c, c) is not None
    assert genus(tropical_3ec(c).graph) == 3
