"""Exact rational and integer linear algebra on nested lists.

Matrices are lists (or tuples) of rows.  Entries are ``int`` or
``fractions.Fraction``; nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

Matrix = list  # list[list[Fraction | int]]


def as_fractions(a) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in a]


def as_ints(a) -> list[list[int]]:
    out = []
    for row in a:
        new = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            new.append(x.numerator)
        out.append(new)
    return out


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def transpose(a) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a, b) -> list[list]:
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    if not bt:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def bilinear(g, u, v):
    """Return u^T g v."""
    return dot(u, matvec(g, v))


def quad(g, v):
    return bilinear(g, v, v)


def congruent(h, g) -> list[list]:
    """Return h g h^T."""
    return matmul(matmul(h, g), transpose(h))


def scale(c, a) -> list[list]:
    return [[c * x for x in row] for row in a]


def block_diag(a, b) -> list[list]:
    m, n = len(a), len(b)
    out = zeros(m + n, m + n)
    for i in range(m):
        for j in range(m):
            out[i][j] = a[i][j]
    for i in range(n):
        for j in range(n):
            out[m + i][m + j] = b[i][j]
    return out


def _echelon(a):
    """Row-reduce a copy of ``a`` over Q; return (reduced rows, pivot columns, sign-tracked det factor)."""
    m = [list(map(Fraction, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a) -> int:
    if not a or not a[0]:
        return 0
    return len(_echelon(a)[1])


def det(a) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [list(map(Fraction, row)) for row in a]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, piv = _echelon(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]


def int_inverse(a) -> list[list[int]]:
    """Inverse of a unimodular integer matrix."""
    return as_ints(inverse(a))


def solve(a, b) -> list[Fraction] | None:
    """Solve a x = b for square nonsingular a; None if singular."""
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    red, piv = _echelon(aug)
    if piv[:n] != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def nullspace(a, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : a x = 0} over Q."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(a[0])
    red, piv = _echelon(a)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def column_echelon(a) -> tuple[list[list[int]], list[list[int]], int]:
    """Integer column reduction.

    Returns ``(h, u, r)`` with ``a u = h`` where ``u`` is unimodular, the first
    ``r`` columns of ``h`` are linearly independent and the remaining columns
    are zero.  The last ``n - r`` columns of ``u`` are a basis of the integer
    kernel lattice of ``a`` (which is automatically saturated).
    """
    h = [list(row) for row in as_ints(a)]
    m = len(h)
    n = len(h[0]) if m else 0
    u = identity(n)

    def colop(j, k, c):  # col_k -= c * col_j
        for row in h:
            row[k] -= c * row[j]
        for row in u:
            row[k] -= c * row[j]

    def swap(j, k):
        for row in h:
            row[j], row[k] = row[k], row[j]
        for row in u:
            row[j], row[k] = row[k], row[j]

    def negate(j):
        for row in h:
            row[j] = -row[j]
        for row in u:
            row[j] = -row[j]

    k = 0
    for i in range(m):
        if k == n:
            break
        while True:
            nz = [j for j in range(k, n) if h[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(h[i][j]))
            swap(k, j0)
            done = True
            for j in range(k + 1, n):
                if h[i][j] != 0:
                    colop(k, j, h[i][j] // h[i][k])
                    if h[i][j] != 0:
                        done = False
            if done:
                break
        if any(h[i][j] != 0 for j in range(k, n)):
            if h[i][k] < 0:
                negate(k)
            k += 1
    return h, u, k


def integer_kernel(a, ncols: int) -> list[list[int]]:
    """Saturated Z-basis (as rows) of the integer kernel of ``a``."""
    if not a:
        return identity(ncols)
    _, u, r = column_echelon(a)
    return [list(col) for col in transpose(u)[r:]]


def unimodular_completion(rows, n: int) -> list[list[int]]:
    """Complete integer rows spanning a direct summand to a unimodular n x n matrix.

    The rows must define a surjection Z^n -> Z^len(rows).
    """
    rows = as_ints(rows)
    r = len(rows)
    if r == 0:
        return identity(n)
    h, u, rk = column_echelon(rows)
    if rk != r:
        raise ValueError("rows are linearly dependent")
    hh = [row[:r] for row in h]
    if abs(det(hh)) != 1:
        raise ValueError("rows do not span a direct summand")
    w = matmul(block_diag(hh, identity(n - r)), int_inverse(u))
    assert w[:r] == rows
    return w


def is_unimodular(a) -> bool:
    try:
        as_ints(a)
    except ValueError:
        return False
    return abs(det(a)) == 1


def psd_rank(g) -> int | None:
    """Exact symmetric-pivoted LDL^T; return rank if g is PSD, else None."""
    m = [list(map(Fraction, row)) for row in g]
    n = len(m)
    active = list(range(n))
    r = 0
    while active:
        p = max(active, key=lambda i: m[i][i])
        if m[p][p] < 0:
            return None
        if m[p][p] == 0:
            if any(m[i][j] != 0 for i in active for j in active):
                return None
            break
        piv = m[p][p]
        active.remove(p)
        for i in active:
            f = m[i][p] / piv
            if f:
                for j in active:
                    m[i][j] -= f * m[p][j]
        r += 1
    return r


def is_symmetric(g) -> bool:
    n = len(g)
    return all(len(row) == n for row in g) and all(g[i][j] == g[j][i] for i in range(n) for j in range(i))


def gram_schmidt(g, basis=None):
    """Gram-Schmidt data (mu, squared norms) of the rows of ``basis`` for the form g."""
    n = len(g)
    b = basis if basis is not None else identity(n)
    k = len(b)
    mu = [[Fraction(0)] * k for _ in range(k)]
    bstar = [Fraction(0)] * k
    gram = [[bilinear(g, b[i], b[j]) for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(i):
            s = gram[i][j] - sum(mu[j][t] * mu[i][t] * bstar[t] for t in range(j))
            mu[i][j] = s / bstar[j]
        bstar[i] = gram[i][i] - sum(mu[i][t] ** 2 * bstar[t] for t in range(i))
    return mu, bstar


def lll(g, delta=Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce the standard basis for a positive definite Gram matrix.

    Returns a unimodular matrix whose rows are the reduced basis, so the
    reduced Gram matrix is ``b g b^T``.
    """
    g = as_fractions(g)
    n = len(g)
    b = identity(n)
    if n <= 1:
        return b
    k = 1
    mu, bstar = gram_schmidt(g, b)
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, bstar = gram_schmidt(g, b)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, bstar = gram_schmidt(g, b)
            k = max(k - 1, 1)
    return b


def lcm_of_denominators(a) -> int:
    m = 1
    for row in a:
        for x in row:
            d = Fraction(x).denominator
            m = m * d // gcd(m, d)
    return m


def floor_sqrt_bound(t: Fraction) -> int:
    """An integer s with s >= sqrt(t) for t >= 0 (not necessarily tight)."""
    if t <= 0:
        return 0
    c = -(-t.numerator // t.denominator)
    return isqrt(c) + 1


def rows_equal(a, b) -> bool:
    return [list(map(Fraction, r)) for r in a] == [list(map(Fraction, r)) for r in b]


def to_tuple(a) -> tuple:
    return tuple(tuple(row) for row in a)


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(u, v))
