import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from builders import random_unimodular, stable_graphs
from torelli import linalg as la
from torelli.delaunay import decompositions_equivalent, delaunay, delaunay_of_graph, map_cells, refines
from torelli.errors import ComputationalLimitError, ValidationError
from torelli.forms import QuadraticForm, graph_form
from torelli.polytope import affine_dim, face_lattice, volume
from torelli.tropical import TropicalCurve, cycle_basis

I2 = QuadraticForm.from_rows([[1, 0], [0, 1]])
A2 = QuadraticForm.from_rows([[2, -1], [-1, 2]])
FLIP = QuadraticForm.from_rows([[2, 1], [1, 2]])


@pytest.mark.parametrize("gram, f", [
    ([[1, 0], [0, 1]], (1, 2, 1)),
    ([[2, -1], [-1, 2]], (1, 3, 2)),
    ([[0, 0], [0, 0]], (1,)),
    ([[1, 0], [0, 0]], (1, 1)),
    ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], (1, 6, 8, 3)),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, 3, 3, 1)),
])
def test_f_vectors(gram, f):
    d = delaunay(QuadraticForm.from_rows(gram))
    assert d.f_vector == f
    if d.rank:
        assert d.volume_certificate() == 1


def test_square_and_triangle_cells():
    assert {len(c) for c in delaunay(I2).star} == {4}
    assert {len(c) for c in delaunay(A2).star} == {3}
    assert len(delaunay(A2).star) == 6


def test_equivalence_examples():
    rel = decompositions_equivalent(delaunay(A2), delaunay(FLIP))
    assert rel is not None and la.is_unimodular(rel.witness)
    assert decompositions_equivalent(delaunay(A2), delaunay(I2)) is None


def test_refinement_examples():
    zero = delaunay(QuadraticForm.from_rows([[0, 0], [0, 0]]))
    assert refines(delaunay(A2), zero) is not None
    assert refines(delaunay(A2), delaunay(I2)) is not None
    assert refines(delaunay(I2), delaunay(A2)) is None


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        decompositions_equivalent(delaunay(A2), delaunay(QuadraticForm.from_rows([[1]])))


def test_limit():
    with pytest.raises(ComputationalLimitError):
        decompositions_equivalent(delaunay(A2), delaunay(FLIP), limit=1)


def _circumcenter(gram, cell):
    """alpha with Q(v) = 2 v^T G alpha on every vertex of a full cell containing 0."""
    pts = [p for p in cell if any(p)]
    r = len(gram)
    rows, rhs = [], []
    for p in pts:
        row = la.matvec(gram, p)  # (G p)^T alpha = Q(p)/2
        if la.rank(rows + [row]) == len(rows) + 1:
            rows.append(row)
            rhs.append(la.quad(gram, p) / 2)
        if len(rows) == r:
            break
    return la.solve(rows, rhs)


def _in_sphere(gram, alpha, box):
    out_on, out_in = set(), set()
    for y in itertools.product(range(-box, box + 1), repeat=len(gram)):
        v = la.quad(gram, y) - 2 * la.dot(y, la.matvec(gram, alpha))
        if v == 0:
            out_on.add(y)
        elif v < 0:
            out_in.add(y)
    return out_on, out_in


@st.composite
def pd_forms(draw, max_dim=3):
    n = draw(st.integers(1, max_dim))
    a = [[draw(st.sampled_from((1, -1, 2))) if i == j else draw(st.integers(-1, 1)) if j < i else 0
          for j in range(n)] for i in range(n)]
    return QuadraticForm.from_rows([[sum(a[i][k] * a[j][k] for k in range(n)) for j in range(n)] for i in range(n)])


@settings(max_examples=25, deadline=None)
@given(pd_forms())
def test_empty_sphere_by_box_scan(q):
    d = delaunay(q)
    gram = d.reduced_form.gram
    for cell in d.star:
        alpha = _circumcenter(gram, cell)
        box = 3
        while True:
            on, inside = _in_sphere(gram, alpha, box)
            if (on, inside) == _in_sphere(gram, alpha, box + 1):
                break
            box += 1
        assert not inside
        assert on == set(cell)


@settings(max_examples=25, deadline=None)
@given(pd_forms())
def test_volume_certificate(q):
    d = delaunay(q)
    assert d.volume_certificate() == 1
    for c in d.star:
        assert affine_dim(c) == d.rank and (0,) * d.rank in c


@settings(max_examples=25, deadline=None)
@given(pd_forms(), st.randoms(use_true_random=False))
def test_congruent_forms_have_equivalent_pavings(q, rng):
    h = random_unimodular(rng, q.dim)
    d1, d2 = delaunay(q), delaunay(q.transform(h))
    rel = decompositions_equivalent(d1, d2)
    assert rel is not None
    assert map_cells(rel.lattice_map, d1.cells) == d2.cells
    assert decompositions_equivalent(d2, d1) is not None


def _arrangement_cell(functionals, p, box):
    """Lattice points in the closed region of {f(x) in Z} that contains the generic point p."""
    lo_hi = [(math.floor(f(p)), math.ceil(f(p))) for f in functionals]
    out = set()
    for y in itertools.product(range(-box, box + 1), repeat=len(p)):
        if all(lo <= f(y) <= hi for f, (lo, hi) in zip(functionals, lo_hi)):
            out.add(y)
    return out


@pytest.mark.parametrize("i", range(0, 42, 2))
def test_graph_paving_is_the_edge_arrangement(genus3, i):
    """For a graph form, cells are cut out by the hyperplanes where an edge coordinate is an integer."""
    g = genus3[i]
    d = delaunay_of_graph(g)
    if d.rank == 0:
        return
    basis = cycle_basis(g)
    lift = [[row[k] for k in range(d.rank)] for row in d.basis]  # ambient = lift . reduced
    functionals = []
    for idx, e in enumerate(basis.edges):
        # cycle coordinates come first; weight directions do not meet any edge
        coeff = [r[idx] for r in basis.rows] + [0] * (d.ambient_dim - len(basis.rows))
        red = [sum(coeff[a] * lift[a][k] for a in range(d.ambient_dim)) for k in range(d.rank)]
        if any(red):
            functionals.append(lambda y, red=red: sum(Fraction(c) * x for c, x in zip(red, y)))
    for cell in d.star:
        for f in functionals:
            vals = [f(p) for p in cell]
            assert max(vals) - min(vals) <= 1
        bary = tuple(Fraction(sum(p[k] for p in cell), len(cell)) for k in range(d.rank))
        box = max(abs(x) for p in cell for x in p) + 1
        while _arrangement_cell(functionals, bary, box) != _arrangement_cell(functionals, bary, box + 1):
            box += 1
        assert _arrangement_cell(functionals, bary, box) == set(cell)
