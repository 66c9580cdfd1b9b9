"""Small exact linear algebra over Q (row reduction on Fractions)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[1])


def solve_rational(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of ``A x = b`` (overdetermined allowed), else None."""
    if not A:
        return None
    n = len(A[0])
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    M, piv = _rref(aug)
    if n in piv:
        return None  # inconsistent
    if len(piv) < n:
        return None  # not unique
    x = [Fraction(0)] * n
    for i, col in enumerate(piv):
        x[col] = M[i][n]
    return x


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    M, piv = _rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, col in enumerate(piv):
            v[col] = -M[i][f]
        basis.append(v)
    return basis


def primitive_int(v: Sequence) -> tuple[int, ...]:
    """Positive rational multiple of ``v`` with coprime integer entries."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)
