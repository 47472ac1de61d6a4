"""Exact linear algebra over Z and Q.

Everything here works on plain nested lists/tuples of ``int`` or
``fractions.Fraction``; nothing is floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Sequence

__all__ = [
    "identity",
    "mat_mul",
    "mat_vec",
    "vec_mat",
    "inverse",
    "integer_inverse",
    "determinant",
    "hermite_normal_form",
    "smith_normal_form",
    "nullspace",
]

Matrix = Sequence[Sequence]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> list[list]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def mat_vec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_mat(v: Sequence, a: Matrix) -> list:
    """Row vector times matrix."""
    return [sum(x * row[j] for x, row in zip(v, a)) for j in range(len(a[0]))]


def inverse(a: Matrix) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over Q. Raises ``ValueError`` if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def integer_inverse(a: Matrix) -> tuple[tuple[int, ...], ...]:
    inv = inverse(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def determinant(a: Matrix) -> Fraction:
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def hermite_normal_form(rows: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form; zero rows are dropped.

    >>> hermite_normal_form([[2, 0], [0, 3], [1, 1]])
    [[1, 0], [0, 1]]
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            clean = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    clean = clean and a[i][c] == 0
            if clean:
                break
        if r < m and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == m:
                break
    return a[:r]


def smith_normal_form(a: Matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(D, U, V)`` with ``U @ a @ V == D`` diagonal, ``U``, ``V`` unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    d = [list(map(int, r)) for r in a]
    m, n = len(d), len(d[0])
    u, v = identity(m), identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (d, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for mat in (d, v):
            for row in mat:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            cands = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
            if not cands:
                break
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
            while True:
                for i in range(t + 1, m):
                    if d[i][t]:
                        add_row(i, t, -(d[i][t] // d[t][t]))
                for j in range(t + 1, n):
                    if d[t][j]:
                        add_col(j, t, -(d[t][j] // d[t][t]))
                rest = [(abs(d[i][t]), i, None) for i in range(t + 1, m) if d[i][t]]
                rest += [(abs(d[t][j]), None, j) for j in range(t + 1, n) if d[t][j]]
                if not rest:
                    break
                _, i, j = min(rest, key=lambda c: c[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return d, u, v


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = reduce(gcd, row.values(), 0)
    if g > 1:
        return {c: x // g for c, x in row.items()}
    return row


def _to_integer_row(row: Mapping[int, int | Fraction]) -> dict[int, int]:
    vals = {c: Fraction(x) for c, x in row.items() if x != 0}
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in vals.values()), 1)
    return _primitive({c: int(x * den) for c, x in vals.items()})


def nullspace(rows: Iterable[Mapping[int, int | Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : row . x = 0 for every row}`` for sparse rows ``{col: coeff}``.

    Elimination is fraction-free: rows are kept as primitive integer vectors
    and combined by integer cross-multiplication, so intermediate entries
    never carry denominators.  The returned basis is in reduced form: one
    vector per free column, with a 1 there and 0 on every other free column.

    >>> nullspace([{0: 1, 1: -1}], 2)
    [[Fraction(1, 1), Fraction(1, 1)]]
    """
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = _to_integer_row(raw)
        while row:
            hit = next((c for c in row if c in pivots), None)
            if hit is None:
                break
            p = pivots[hit]
            a, b = p[hit], row[hit]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {c: a * x for c, x in row.items()}
            for c, x in p.items():
                new[c] = new.get(c, 0) - b * x
            row = _primitive({c: x for c, x in new.items() if x})
        if not row:
            continue
        c = min(row)
        if row[c] < 0:
            row = {k: -x for k, x in row.items()}
        for k, p in list(pivots.items()):
            if c in p:
                a, b = row[c], p[c]
                g = gcd(a, b)
                a, b = a // g, b // g
                new = {j: a * x for j, x in p.items()}
                for j, x in row.items():
                    new[j] = new.get(j, 0) - b * x
                new = _primitive({j: x for j, x in new.items() if x})
                if new[k] < 0:
                    new = {j: -x for j, x in new.items()}
                pivots[k] = new
        pivots[c] = row

    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for c, p in pivots.items():
            if f in p:
                vec[c] = Fraction(-p[f], p[c])
        basis.append(vec)
    return basis
