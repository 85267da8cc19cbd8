import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from builders import random_separated_model, rename_vertices
from torelli.connectivity import twist, twist_specs
from torelli.errors import ComputationalLimitError, ValidationError
from torelli.graphs import WeightedGraph, canonical_key, cycle_graph, dumbbell, single_vertex, theta
from torelli.stable import (
    CurveModel,
    apply_twists,
    bridgeless_multigraphs,
    c1_equivalent,
    c1_sets,
    canonical_image,
    compactified_fiber_equal,
    images_isomorphic,
    labelled_models,
    separating_blocks,
    stabilize_block,
    stabilized_blocks,
    twist_equivalent,
)


def labelled_cycle(labels, chord=None):
    g = cycle_graph(4)
    if chord:
        g = WeightedGraph(g.vertices, g.weights, g.edges + (("ch",) + chord,))
    return CurveModel.build(g, dict(zip(g.vertices, labels)), check_stable=False)


@pytest.fixture(scope="module")
def small_models():
    return labelled_models(bridgeless_multigraphs(5), "AB")


def test_four_cycle_has_one_c1_set():
    part = c1_sets(labelled_cycle("ABCD"))
    assert [len(c) for c in part.classes] == [4]


def test_four_cycle_image():
    img = canonical_image(labelled_cycle("ABCD"))
    assert [p.multiplicity for p in img.points] == [8]


def test_theta_c1_sets_are_singletons():
    x = CurveModel.build(theta())
    assert sorted(len(c) for c in c1_sets(x).classes) == [1, 1, 1]


def test_twisted_four_cycle_is_c1_equivalent():
    x = labelled_cycle("ABCD")
    y = apply_twists(x, [twist_specs(x.dual)[1]])
    w = c1_equivalent(x, y)
    assert w is not None
    assert twist_equivalent(x, y) is not None


def test_chords_on_opposite_diagonals_are_not_equivalent():
    x = labelled_cycle("ABCD", ("v0", "v2"))
    y = labelled_cycle("ABCD", ("v1", "v3"))
    assert c1_equivalent(x, y) is None
    assert twist_equivalent(x, y) is None


def test_bridges_are_rejected():
    x = CurveModel.build(dumbbell())
    with pytest.raises(ValidationError):
        c1_sets(x)
    with pytest.raises(ValidationError):
        stabilize_block(x)


def test_separating_blocks_of_dumbbell():
    dec = separating_blocks(CurveModel.build(dumbbell()))
    assert dec.bridge_count == 1 and len(dec.blocks) == 2
    assert all(b.genus == 1 for b in dec.positive_genus_blocks)


def test_stabilize_smooths_exceptional_components():
    # theta with one edge broken by a weight-0 vertex
    g = WeightedGraph(("u", "v", "m"), (0, 0, 0), (("e1", "u", "v"), ("e2", "u", "v"), ("a", "u", "m"), ("b", "m", "v")))
    x = CurveModel.build(g, {"u": "A", "v": "B", "m": "C"}, check_stable=False)
    s = stabilize_block(x)
    assert len(s.dual.vertices) == 2 and sorted(s.labels) == ["A", "B"]
    assert canonical_key(s.dual) == canonical_key(theta())


def test_stabilize_genus_zero_rejected():
    x = CurveModel(WeightedGraph(("a",), (0,), ()), ("A",), check_stable=False)
    with pytest.raises(ValidationError):
        stabilize_block(x)


def test_fiber_compare_rejects_genus_mismatch():
    with pytest.raises(ValidationError):
        compactified_fiber_equal(CurveModel.build(theta()), CurveModel.build(single_vertex(3)))


def test_dumbbell_vs_genus_two_vertex():
    r = compactified_fiber_equal(CurveModel.build(dumbbell()), CurveModel.build(single_vertex(2)))
    assert not r.equal and "positive-genus blocks" in r.reason


def test_twist_orbit_limit():
    x = labelled_cycle("ABCD")
    y = labelled_cycle("ABDC")
    with pytest.raises(ComputationalLimitError):
        twist_equivalent(x, y, limit=1)


def test_images_agree_with_c1(small_models):
    buckets = {}
    for x in small_models:
        buckets.setdefault((len(x.dual.edges), len(x.dual.vertices)), []).append(x)
    for xs in buckets.values():
        for a, b in itertools.combinations(xs, 2):
            assert images_isomorphic(canonical_image(a), canonical_image(b)) == (c1_equivalent(a, b) is not None)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_twists_preserve_c1_class(rng):
    models = labelled_models(bridgeless_multigraphs(5), "AB")
    x = rng.choice(models)
    specs = twist_specs(x.dual)
    if not specs:
        return
    y = apply_twists(x, [rng.choice(specs)])
    w = c1_equivalent(x, y)
    assert w is not None
    assert set(w.vertex_map) == set(x.dual.vertices)
    assert all(x.label[v] == y.label[w.vertex_map[v]] for v in x.dual.vertices)


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_stabilization_order_independent(rng):
    x = random_separated_model(rng)
    for b in separating_blocks(x).positive_genus_blocks:
        order = {v: rng.random() for v in b.dual.vertices}
        assert stabilize_block(b).key() == stabilize_block(b, order=order.get).key()


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_fiber_comparison_is_an_equivalence(rng):
    x = random_separated_model(rng)
    y = rename_vertices(rng, x)
    assert compactified_fiber_equal(x, x).equal
    assert compactified_fiber_equal(x, y).equal and compactified_fiber_equal(y, x).equal
    r = compactified_fiber_equal(x, y)
    assert len(r.matching) == len(stabilized_blocks(x))
