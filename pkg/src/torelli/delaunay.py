"""Delaunay decompositions of positive semidefinite rational forms.

The form is first split into a positive definite part on Z^r and its null
lattice.  On the definite part the cells incident to the origin are read off
from the vertices of the Voronoi cell: each Voronoi vertex ``a`` is the centre
of an empty ellipsoid through the origin and the lattice points on it span a
full-dimensional Delaunay cell.  All candidate points are certified by the
bound ``Q(x) <= trace`` on an LLL-reduced basis, because the squared covering
radius is at most a quarter of the trace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import TYPE_CHECKING

from . import linalg as la
from .errors import ComputationalLimitError, ValidationError
from .forms import QuadraticForm, graph_form, null_split, short_vectors
from .polytope import affine_dim, canonical_translate, face_lattice, volume

if TYPE_CHECKING:
    from .graphs import WeightedGraph

Point = tuple[int, ...]
Cell = tuple[Point, ...]

WITNESS_LIMIT = 2_000_000
SUBSET_LIMIT = 2_000_000


@dataclass(frozen=True)
class DelaunayDecomposition:
    """Delaunay paving of a PSD form, stored on the definite quotient Z^r.

    ``star`` lists the full-dimensional cells containing the origin and
    ``cells`` every cell (all dimensions) modulo translation, each as its
    canonical translate.  Cells of the paving of R^g are the preimages of
    these under ``projection``.
    """

    ambient_dim: int
    rank: int
    projection: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]
    reduced_form: QuadraticForm
    star: tuple[Cell, ...]
    cells: frozenset = field(repr=False)

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.rank + 1)
        for c in self.cells:
            counts[_dim(c)] += 1
        return tuple(counts)

    @cached_property
    def star_cells(self) -> frozenset:
        """All cells (any dimension) containing the origin."""
        origin = (0,) * self.rank
        out = set()
        for c in self.star:
            for f in face_lattice(c):
                if origin in f:
                    out.add(tuple(sorted(f)))
        return frozenset(out)

    @cached_property
    def edge_vectors(self) -> frozenset:
        """Nonzero endpoints of the one-dimensional cells at the origin (closed under negation)."""
        origin = (0,) * self.rank
        return frozenset(p for c in self.star_cells if len(c) == 2 for p in c if p != origin)

    @cached_property
    def star_points(self) -> frozenset:
        return frozenset(p for c in self.star for p in c)

    def volume_certificate(self) -> Fraction:
        """Sum over star cells of volume / number of vertices; equals 1 for a tiling."""
        return sum((volume(c) / len(c) for c in self.star), Fraction(0))


def _dim(cell) -> int:
    return affine_dim(cell)


@dataclass(frozen=True)
class PavingRelation:
    """``witness`` acts on R^g; for equivalence it carries d1 onto d2.

    For refinement every cell of ``witness . d1`` lies in a cell of
    ``witness2 . d2``.  ``lattice_map`` is the induced map on the definite
    quotients.
    """

    kind: str
    witness: tuple[tuple[int, ...], ...]
    witness2: tuple[tuple[int, ...], ...] | None = None
    lattice_map: tuple[tuple[int, ...], ...] = ()


def _voronoi_relevant(gram, cands) -> list[Point]:
    """Vectors v that are, with -v, the only minima of their class mod 2Z^r."""
    q = lambda v: la.quad(gram, v)  # noqa: E731
    by_coset: dict[tuple, list] = {}
    for v in cands:
        by_coset.setdefault(tuple(x % 2 for x in v), []).append(v)
    out = []
    for vs in by_coset.values():
        m = min(q(v) for v in vs)
        mins = [v for v in vs if q(v) == m]
        if len(mins) == 2:
            out.extend(mins)
    return sorted(out)


def _voronoi_vertices(gram, relevant, limit) -> list[tuple[Fraction, ...]]:
    r = len(gram)
    normals = [(tuple(2 * x for x in la.matvec(gram, v)), la.quad(gram, v)) for v in relevant]
    verts = set()
    count = 0
    for combo in itertools.combinations(range(len(normals)), r):
        count += 1
        if count > limit:
            raise ComputationalLimitError("Voronoi vertex enumeration", limit)
        a = [normals[i][0] for i in combo]
        sol = la.solve(a, [normals[i][1] for i in combo])
        if sol is None:
            continue
        if all(la.dot(n, sol) <= b for n, b in normals):
            verts.add(tuple(sol))
    return sorted(verts)


def _star_in_reduced_basis(gram, limit) -> list[frozenset]:
    r = len(gram)
    bound = sum(gram[i][i] for i in range(r))
    cands = short_vectors(QuadraticForm.from_rows(gram), bound, limit)
    relevant = _voronoi_relevant(gram, cands)
    origin = (0,) * r
    cells = []
    for a in _voronoi_vertices(gram, relevant, limit or SUBSET_LIMIT):
        ga = la.matvec(gram, a)
        pts = {origin}
        for x in cands:
            lhs, rhs = la.quad(gram, x), 2 * la.dot(x, ga)
            if lhs < rhs:
                raise AssertionError("Delaunay sphere is not empty")
            if lhs == rhs:
                pts.add(tuple(x))
        cells.append(frozenset(pts))
    return cells


def delaunay(q: QuadraticForm, limit: int | None = None) -> DelaunayDecomposition:
    split = null_split(q)
    r = split.rank
    if r == 0:
        cell = ((),)
        return DelaunayDecomposition(q.dim, 0, (), split.basis, split.reduced_form, (cell,), frozenset({cell}))
    gram = split.reduced_form.gram
    b = la.lll(gram)
    reduced = la.congruent(b, gram)
    bt = la.transpose(b)
    star = []
    for cell in _star_in_reduced_basis(reduced, limit):
        # a point with coordinates c in the reduced basis is b^T c in Z^r
        star.append(tuple(sorted(tuple(la.matvec(bt, c)) for c in cell)))
    star.sort()
    cells = set()
    for c in star:
        for f in face_lattice(c):
            cells.add(canonical_translate(f))
    return DelaunayDecomposition(q.dim, r, split.projection, split.basis, split.reduced_form, tuple(star), frozenset(cells))


def delaunay_of_graph(g: "WeightedGraph", limit: int | None = None) -> DelaunayDecomposition:
    return delaunay(graph_form(g), limit)


def map_cells(k, cells) -> frozenset:
    return frozenset(canonical_translate(tuple(tuple(la.matvec(k, p)) for p in c)) for c in cells)


def _independent_subset(vectors, r) -> list[Point]:
    """r linearly independent vectors, greedily in sorted order."""
    chosen: list[Point] = []
    for v in sorted(vectors, key=lambda v: (sum(abs(x) for x in v), v)):
        if la.rank(chosen + [v]) == len(chosen) + 1:
            chosen.append(v)
            if len(chosen) == r:
                break
    return chosen


def _ambient_witness(d1: DelaunayDecomposition, d2: DelaunayDecomposition, p) -> list[list[int]]:
    """Unimodular h on Z^g inducing the surjection p on the definite quotients."""
    g = d1.ambient_dim
    r1 = d1.rank
    top = [list(row) + [0] * (g - r1) for row in p]
    v = la.unimodular_completion(top, g) if top else la.identity(g)
    basis1 = [list(row) for row in d1.basis]
    basis2 = [list(row) for row in d2.basis]
    h = la.matmul(la.matmul(basis2, v), la.int_inverse(basis1))
    h = la.as_ints(h)
    assert la.is_unimodular(h)
    proj1 = [list(r) for r in d1.projection]
    proj2 = [list(r) for r in d2.projection]
    if proj2:
        assert la.matmul(proj2, h) == la.matmul([list(r) for r in p], proj1)
    return h


def decompositions_equivalent(
    d1: DelaunayDecomposition, d2: DelaunayDecomposition, limit: int | None = None
) -> PavingRelation | None:
    if d1.ambient_dim != d2.ambient_dim:
        raise ValidationError("decompositions have different ambient dimensions")
    if d1.rank != d2.rank or d1.f_vector != d2.f_vector:
        return None
    if sorted(len(c) for c in d1.cells) != sorted(len(c) for c in d2.cells):
        return None
    r = d1.rank
    if r == 0:
        h = _ambient_witness(d1, d2, [])
        return PavingRelation("equivalence", la.to_tuple(h), None, ())
    limit = WITNESS_LIMIT if limit is None else limit
    e1, e2 = d1.edge_vectors, d2.edge_vectors
    if len(e1) != len(e2):
        return None
    basis = _independent_subset(e1, r)
    assert len(basis) == r, "edge vectors of a Delaunay paving span the lattice"
    binv = la.inverse(la.transpose(basis))
    targets = sorted(e2)
    count = 0
    for images in itertools.product(targets, repeat=r):
        count += 1
        if count > limit:
            raise ComputationalLimitError("Delaunay equivalence witness search", limit)
        k = la.matmul(la.transpose(images), binv)
        if any(x.denominator != 1 for row in k for x in row):
            continue
        k = la.as_ints(k)
        if abs(la.det(k)) != 1:
            continue
        if frozenset(tuple(la.matvec(k, v)) for v in e1) != e2:
            continue
        if map_cells(k, d1.cells) != d2.cells:
            continue
        h = _ambient_witness(d1, d2, k)
        return PavingRelation("equivalence", la.to_tuple(h), None, la.to_tuple(k))
    return None


def _is_surjective(p, r2) -> bool:
    if r2 == 0:
        return True
    h, _, rk = la.column_echelon(p)
    return rk == r2 and abs(la.det([row[:r2] for row in h])) == 1


def refines(d1: DelaunayDecomposition, d2: DelaunayDecomposition, limit: int | None = None) -> PavingRelation | None:
    """Witness that some GL(Z)-image of d1 refines d2, or None."""
    if d1.ambient_dim != d2.ambient_dim:
        raise ValidationError("decompositions have different ambient dimensions")
    r1, r2 = d1.rank, d2.rank
    if r1 < r2:
        return None
    limit = WITNESS_LIMIT if limit is None else limit
    ident = la.to_tuple(la.identity(d1.ambient_dim))
    if r2 == 0:
        p: list = []
        h = _ambient_witness(d1, d2, p)
        return PavingRelation("refinement", la.to_tuple(h), ident, ())
    basis = _independent_subset(d1.edge_vectors, r1)
    assert len(basis) == r1
    binv = la.inverse(la.transpose(basis))
    targets = sorted(d2.star_points)
    cells2 = [frozenset(c) for c in d2.star]
    count = 0
    for images in itertools.product(targets, repeat=r1):
        count += 1
        if count > limit:
            raise ComputationalLimitError("Delaunay refinement witness search", limit)
        p = la.matmul(la.transpose(images), binv)
        if any(x.denominator != 1 for row in p for x in row):
            continue
        p = la.as_ints(p)
        if not _is_surjective(p, r2):
            continue
        ok = True
        for c in d1.star:
            img = {tuple(la.matvec(p, v)) for v in c}
            if not any(img <= c2 for c2 in cells2):
                ok = False
                break
        if ok:
            h = _ambient_witness(d1, d2, p)
            return PavingRelation("refinement", la.to_tuple(h), ident, la.to_tuple(p))
    return None
