"""Exact face lattices and volumes of small lattice polytopes given by their vertex sets."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

from . import linalg as la

Point = tuple[int, ...]


def affine_dim(points) -> int:
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    return la.rank([la.vec_sub(p, p0) for p in pts[1:]]) if len(pts) > 1 else 0


def _hyperplane(points, n):
    """(a, b) with a.x = b through the points, if they span a hyperplane of R^n."""
    rows = [list(p) + [-1] for p in points]
    ns = la.nullspace(rows, n + 1)
    if len(ns) != 1:
        return None
    v = ns[0]
    return v[:n], v[n]


def facets(points: frozenset, dim: int | None = None) -> set[frozenset]:
    """Facets (as vertex subsets) of conv(points) inside its own affine hull."""
    pts = sorted(points)
    d = affine_dim(pts) if dim is None else dim
    if d <= 0:
        return set()
    # work in coordinates of the affine hull so that facets are hyperplanes
    p0 = pts[0]
    diffs = [la.vec_sub(p, p0) for p in pts]
    _, piv = la._echelon([list(x) for x in diffs if any(x)])
    # projecting onto the pivot coordinates is injective on the affine hull
    coords = {p: tuple(Fraction(x[c]) for c in piv) for p, x in zip(pts, diffs)}
    out = set()
    for combo in itertools.combinations(pts, d):
        hp = _hyperplane([coords[p] for p in combo], d)
        if hp is None:
            continue
        a, b = hp
        vals = {p: la.dot(a, coords[p]) - b for p in pts}
        if all(v >= 0 for v in vals.values()) or all(v <= 0 for v in vals.values()):
            out.add(frozenset(p for p in pts if vals[p] == 0))
    return out


def face_lattice(points) -> dict[frozenset, int]:
    """All nonempty faces of conv(points) mapped to their dimension."""
    top = frozenset(points)
    d = affine_dim(top)
    faces = {top: d}
    frontier = [top]
    while frontier:
        nxt = []
        for f in frontier:
            for g in facets(f, faces[f]):
                if g not in faces:
                    faces[g] = faces[f] - 1
                    nxt.append(g)
        frontier = nxt
    for f, k in faces.items():
        assert affine_dim(f) == k
    return faces


def pulling_triangulation(points, lattice: dict[frozenset, int] | None = None) -> list[tuple[Point, ...]]:
    """Simplices of the pulling triangulation that cones from the least vertex of each face."""
    faces = lattice or face_lattice(points)
    top = frozenset(points)

    def tri(f):
        k = faces[f]
        if k == 0:
            return [(next(iter(f)),)]
        p0 = min(f)
        out = []
        for g, kg in faces.items():
            if kg == k - 1 and g < f and p0 not in g:
                out.extend((p0,) + s for s in tri(g))
        return out

    return tri(top)


def volume(points) -> Fraction:
    """Euclidean volume of a full-dimensional lattice polytope (1 for a point in R^0)."""
    pts = list(points)
    n = len(pts[0])
    if n == 0:
        return Fraction(1)
    if affine_dim(pts) < n:
        return Fraction(0)
    total = Fraction(0)
    for s in pulling_triangulation(pts):
        total += abs(la.det([la.vec_sub(p, s[0]) for p in s[1:]]))
    return total / factorial(n)


def canonical_translate(cell) -> tuple[Point, ...]:
    """Translate so the lexicographically least vertex is the origin; sorted vertex tuple."""
    pts = sorted(cell)
    p0 = pts[0]
    return tuple(la.vec_sub(p, p0) for p in pts)
