"""Positive semidefinite rational quadratic forms and their GL(Z) classification.

Two Gram matrices are arithmetically equivalent when ``h q1 h^T = q2`` for
some integer matrix ``h`` with determinant +-1.  Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from . import linalg as la
from .errors import ComputationalLimitError, ValidationError

if TYPE_CHECKING:
    from .graphs import WeightedGraph

SHORT_VECTOR_LIMIT = 200_000


@dataclass(frozen=True)
class QuadraticForm:
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not la.is_symmetric(self.gram):
            raise ValidationError("Gram matrix must be square and symmetric")
        if la.psd_rank(self.gram) is None:
            raise ValidationError("quadratic form is not positive semidefinite")

    @classmethod
    def from_rows(cls, rows) -> "QuadraticForm":
        try:
            return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad Gram entry: {exc}") from exc

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def rank(self) -> int:
        return la.psd_rank(self.gram)

    def det(self) -> Fraction:
        return la.det(self.gram)

    def __call__(self, v) -> Fraction:
        return la.quad(self.gram, v)

    def inner(self, u, v) -> Fraction:
        return la.bilinear(self.gram, u, v)

    def is_positive_definite(self) -> bool:
        return self.rank == self.dim

    def transform(self, h) -> "QuadraticForm":
        """The form with Gram matrix h q h^T."""
        return QuadraticForm.from_rows(la.congruent(h, self.gram))

    def scaled(self, c) -> "QuadraticForm":
        return QuadraticForm.from_rows(la.scale(Fraction(c), self.gram))

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.gram]


@dataclass(frozen=True)
class SemidefiniteSplit:
    """``basis^T gram basis = diag(reduced_form, 0)`` with ``basis`` unimodular.

    ``projection`` is the first ``rank`` rows of ``basis^{-1}``; it maps Z^g
    onto Z^r and ``Q(x) = reduced_form(projection x)``.
    """

    rank: int
    projection: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]
    reduced_form: QuadraticForm


def null_split(q: QuadraticForm) -> SemidefiniteSplit:
    g = q.dim
    if g == 0:
        return SemidefiniteSplit(0, (), (), QuadraticForm(()))
    den = la.lcm_of_denominators(q.gram)
    a = la.as_ints(la.scale(den, q.gram))
    _, m, r = la.column_echelon(a)
    d = la.congruent(la.transpose(m), q.gram)
    for i in range(g):
        for j in range(g):
            if (i >= r or j >= r) and d[i][j] != 0:
                raise AssertionError("null space failed to split off")
    reduced = QuadraticForm.from_rows([row[:r] for row in d[:r]])
    if not reduced.is_positive_definite():
        raise AssertionError("reduced form is not positive definite")
    minv = la.int_inverse(m)
    return SemidefiniteSplit(r, la.to_tuple(minv[:r]), la.to_tuple(m), reduced)


def graph_form(g: "WeightedGraph") -> QuadraticForm:
    """Unit-length Jacobian form of a weighted graph."""
    from .tropical import TropicalCurve, jacobian

    return jacobian(TropicalCurve.unit(g, check_stable=False))


def _ldl_upper(gram):
    """q such that Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(gram)
    q = [list(map(Fraction, row)) for row in gram]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(q: QuadraticForm, bound, limit: int | None = None) -> list[tuple[int, ...]]:
    """All integer v != 0 with Q(v) <= bound (both signs), by Fincke-Pohst enumeration."""
    limit = SHORT_VECTOR_LIMIT if limit is None else limit
    bound = Fraction(bound)
    n = q.dim
    if not q.is_positive_definite():
        raise ValidationError("short_vectors needs a positive definite form")
    if bound <= 0 or n == 0:
        return []
    c = _ldl_upper(q.gram)
    out = []
    x = [0] * n

    def rec(i, remaining):
        center = -sum(c[i][j] * x[j] for j in range(i + 1, n))
        t = remaining / c[i][i]
        s = la.floor_sqrt_bound(t)
        lo = int(center) - s - 1
        hi = int(center) + s + 1
        for xi in range(lo, hi + 1):
            d = (xi - center) ** 2 * c[i][i]
            if d > remaining:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    out.append(tuple(x))
                    if len(out) > limit:
                        raise ComputationalLimitError("short vector enumeration", limit)
            else:
                rec(i - 1, remaining - d)
        x[i] = 0

    rec(n - 1, bound)
    assert all(0 < q(v) <= bound for v in out)
    out.sort(key=lambda v: (q(v), v))
    return out


def norm_profile(q: QuadraticForm, bound) -> tuple:
    """Sorted multiset of Q(v) over short vectors up to bound; a congruence invariant for definite q."""
    return tuple(sorted(q(v) for v in short_vectors(q, bound)))


def _isometry(r1: QuadraticForm, r2: QuadraticForm, limit) -> list[list[int]] | None:
    """k with k r1 k^T = r2 for positive definite forms of equal dimension."""
    n = r1.dim
    if n == 0:
        return []
    b2 = la.lll(r2.gram)
    target = la.congruent(b2, r2.gram)
    diag = [target[i][i] for i in range(n)]
    vecs = short_vectors(r1, max(diag), limit)
    by_norm: dict[Fraction, list] = {}
    for v in vecs:
        by_norm.setdefault(r1(v), []).append(v)
    cands = [by_norm.get(diag[i], []) for i in range(n)]
    if any(not c for c in cands):
        return None
    rows: list = []

    def rec(i):
        if i == n:
            return True
        for v in cands[i]:
            if all(r1.inner(v, rows[j]) == target[i][j] for j in range(i)):
                rows.append(v)
                if rec(i + 1):
                    return True
                rows.pop()
        return False

    if not rec(0):
        return None
    k = la.as_ints(la.matmul(la.inverse(b2), rows))
    assert la.rows_equal(la.congruent(k, r1.gram), r2.gram)
    return k


def arithmetically_equivalent(q1: QuadraticForm, q2: QuadraticForm, limit: int | None = None) -> list[list[int]] | None:
    """Unimodular h with h q1 h^T = q2, or None."""
    if q1.dim != q2.dim:
        raise ValidationError("forms have different dimensions")
    g = q1.dim
    if q1.rank != q2.rank:
        return None
    s1, s2 = null_split(q1), null_split(q2)
    r1, r2 = s1.reduced_form, s2.reduced_form
    if r1.det() != r2.det():
        return None
    # same scaling on both sides: congruence does not absorb unequal factors
    lam = la.lcm_of_denominators(list(r1.gram) + list(r2.gram))
    k = _isometry(r1.scaled(lam), r2.scaled(lam), limit)
    if k is None:
        return None
    r = s1.rank
    u1 = la.transpose(s1.basis)
    u2 = la.transpose(s2.basis)
    h = la.matmul(la.matmul(la.int_inverse(u2), la.block_diag(k, la.identity(g - r))), u1)
    h = la.as_ints(h)
    if not (la.is_unimodular(h) and la.rows_equal(la.congruent(h, q1.gram), q2.gram)):
        raise AssertionError("arithmetic equivalence witness failed verification")
    return h
