"""Exact linear algebra over the rationals.

Rank is computed by fraction-free (Bareiss) elimination on arbitrary-precision
integers after each row is cleared of denominators; nullspaces and solutions use
reduced row echelon form over `fractions.Fraction`. Rows are plain sequences of
ints/Fractions; nothing here knows about monomials or points.
"""

from __future__ import annotations

import math
import typing
from fractions import Fraction

Row = typing.Sequence[typing.Union[int, Fraction]]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def integer_row(row: Row) -> typing.List[int]:
    """Scale a rational row by the lcm of its denominators (rank-preserving)."""
    fracs = [as_fraction(x) for x in row]
    scale = 1
    for x in fracs:
        scale = scale * x.denominator // math.gcd(scale, x.denominator)
    return [int(x * scale) for x in fracs]


def bareiss_rank(rows: typing.Sequence[typing.Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination.

    After step k every live entry is a (k+1)-minor of the input, so the division
    by the previous pivot is exact.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    prev = 1
    rank = 0
    col = 0
    while rank < n_rows and col < n_cols:
        pivot = next((i for i in range(rank, n_rows) if a[i][col]), None)
        if pivot is None:
            col += 1
            continue
        if pivot != rank:
            a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        top = a[rank]
        for i in range(rank + 1, n_rows):
            row = a[i]
            f = row[col]
            for j in range(col + 1, n_cols):
                row[j] = (p * row[j] - f * top[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
        col += 1
    return rank


def rank(rows: typing.Sequence[Row]) -> int:
    return bareiss_rank([integer_row(r) for r in rows])


def rref(
    rows: typing.Sequence[Row], n_cols: int
) -> typing.Tuple[typing.List[typing.List[Fraction]], typing.List[int]]:
    """Reduced row echelon form and its pivot columns."""
    m = [[as_fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: typing.Sequence[Row], n_cols: int) -> typing.List[typing.Tuple]:
    """A basis of {x : rows·x = 0}, one vector per free column, in column order."""
    reduced, pivots = rref(rows, n_cols)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(
    columns: typing.Sequence[Row], target: Row
) -> typing.Optional[typing.Tuple[Fraction, ...]]:
    """Coefficients t with Σ t_k·columns[k] == target, or None.

    `columns` must be linearly independent; the solution is then unique.
    """
    n = len(columns)
    dim = len(target)
    aug = [
        [as_fraction(columns[k][i]) for k in range(n)] + [as_fraction(target[i])]
        for i in range(dim)
    ]
    reduced, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    t = [Fraction(0)] * n
    for row, p in zip(reduced, pivots):
        t[p] = row[n]
    return tuple(t)
