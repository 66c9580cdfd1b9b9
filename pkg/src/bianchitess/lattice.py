"""Exact short-vector enumeration for positive definite rational Gram matrices.

The search is a Fincke-Pohst tree walk carried out entirely in integers.
After clearing denominators the Gram matrix ``G`` is decomposed by
fraction-free (Bareiss) elimination into an integer upper-triangular ``U``
and the leading principal minors ``d_0 = 1, d_1, ..., d_n``.  With
``s_i = sum_{j >= i} U[i, j] x[j]`` one has

    x^T G x = sum_i s_i^2 / (d_i d_{i+1}),

and every tail sum ``P_i = sum_{k >= i} s_k^2 / (d_k d_{k+1})`` has the form
``N_i / d_i`` with integral ``N_i``.  The walk therefore only needs integer
square roots and exact floor divisions; no pruning decision is ever made in
floating point.

The inner walk is compiled with numba when it is importable and the
``BIANCHITESS_DISABLE_NUMBA`` environment variable is unset.  The same source
runs uncompiled over object arrays of Python ints otherwise, and also
whenever the int64 range could overflow for a given input.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotPositiveDefinite

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

INT64_SAFE = 2**62

_numba_requested = os.environ.get("BIANCHITESS_DISABLE_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)


def numba_enabled() -> bool:
    return numba is not None and _numba_requested


def set_numba_enabled(flag: bool) -> None:
    """Toggle the compiled path at runtime (used by the benchmark)."""
    global _numba_requested
    _numba_requested = bool(flag)


def isqrt_int(w):
    """Floor square root of a nonnegative integer, 0 for negative input."""
    if w <= 0:
        return 0
    return math.isqrt(int(w))


def walk(U, dv, B, cap):
    n = U.shape[0]
    x = np.zeros_like(dv[:n])
    lo = np.zeros_like(dv[:n])
    hi = np.zeros_like(dv[:n])
    t = np.zeros_like(dv[:n])
    num = np.zeros_like(dv)  # num[i] / dv[i] is the tail sum P_i
    nz_above = np.zeros(n + 1, np.bool_)
    out = np.empty((cap, n + 1), dv.dtype)
    count = 0

    i = n - 1
    W = dv[i] * (B * dv[i + 1])
    r = isqrt_int(W)
    lo[i] = 0
    hi[i] = r // dv[i + 1]
    x[i] = lo[i] - 1
    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i == n:
                break
            continue
        s = t[i] + dv[i + 1] * x[i]
        num[i] = (num[i + 1] * dv[i] + s * s) // dv[i + 1]
        nz_above[i] = nz_above[i + 1] or x[i] != 0
        if i == 0:
            if nz_above[0]:
                if count == out.shape[0]:
                    bigger = np.empty((2 * out.shape[0], n + 1), dv.dtype)
                    bigger[:count] = out[:count]
                    out = bigger
                for j in range(n):
                    out[count, j] = x[j]
                out[count, n] = num[0]
                count += 1
            continue
        i -= 1
        acc = dv[0] * 0
        for j in range(i + 1, n):
            acc += U[i, j] * x[j]
        t[i] = acc
        W = dv[i] * (B * dv[i + 1] - num[i + 1])
        r = isqrt_int(W)
        # ceil((-r - t) / d) and floor((r - t) / d)
        lo[i] = -((r + acc) // dv[i + 1])
        hi[i] = (r - acc) // dv[i + 1]
        if not nz_above[i + 1] and lo[i] < 0:
            lo[i] = 0
        x[i] = lo[i] - 1
    return out[:count]



walk_python = walk

if numba is not None:
    from numba.extending import overload

    @overload(isqrt_int, jit_options={"cache": True})
    def _isqrt_int_nb(w):
        def impl(w):
            if w <= 0:
                return w * 0
            r = np.int64(math.sqrt(float(w)))
            while r * r > w:
                r -= 1
            while (r + 1) * (r + 1) <= w:
                r += 1
            return r

        return impl

    walk_numba = numba.njit(cache=True)(walk)
else:  # pragma: no cover
    walk_numba = None


def bareiss(G: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free elimination of an integer symmetric matrix.

    Returns the upper-triangular rows ``U`` and the leading minors
    ``[d_0, ..., d_n]``.  Raises NotPositiveDefinite on a non-positive pivot.
    """
    n = len(G)
    A = [list(map(int, row)) for row in G]
    dv = [1]
    U = [[0] * n for _ in range(n)]
    for k in range(n):
        piv = A[k][k]
        if piv <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        U[k][k:] = A[k][k:]
        prev = dv[-1]
        dv.append(piv)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (piv * A[i][j] - A[i][k] * A[k][j]) // prev
    return U, dv


def lll_gram(G: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)):
    """LLL-reduce an integer PD Gram matrix.

    Returns ``(T, H)`` with ``T`` unimodular (columns = new basis in old
    coordinates) and ``H = T^T G T``.
    """
    n = len(G)
    H = [list(map(int, row)) for row in G]
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bs = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = Fraction(H[i][j])
                for k in range(j):
                    s -= mu[j][k] * mu[i][k] * bs[k]
                mu[i][j] = s / bs[j]
            s = Fraction(H[i][i])
            for k in range(i):
                s -= mu[i][k] * mu[i][k] * bs[k]
            bs[i] = s
        return mu, bs

    def add(k, j, q):
        # b_k <- b_k - q b_j
        for c in range(n):
            T[c][k] -= q * T[c][j]
        for c in range(n):
            H[k][c] -= q * H[j][c]
        for c in range(n):
            H[c][k] -= q * H[c][j]

    def swap(k, j):
        for c in range(n):
            T[c][k], T[c][j] = T[c][j], T[c][k]
        H[k], H[j] = H[j], H[k]
        for row in H:
            row[k], row[j] = row[j], row[k]

    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10000:  # pragma: no cover
            break
        mu, bs = gso()
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                add(k, j, round(mu[k][j]))
                mu, bs = gso()
        if bs[k] < (delta - mu[k][k - 1] ** 2) * bs[k - 1]:
            swap(k, k - 1)
            k = max(k - 1, 1)
        else:
            k += 1
    return T, H


def _as_fraction_matrix(gram) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in gram]


def _walk(U, dv, B, use_numba: bool):
    n = len(U)
    if use_numba:
        Ua = np.array(U, dtype=np.int64)
        da = np.array(dv, dtype=np.int64)
        return walk_numba(Ua, da, np.int64(B), 64)
    Ua = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            Ua[i, j] = int(U[i][j])
    da = np.empty(n + 1, dtype=object)
    for i, v in enumerate(dv):
        da[i] = int(v)
    return walk_python(Ua, da, int(B), 64)


def _fits_int64(U, dv, B, G) -> bool:
    n = len(U)
    det = dv[-1]
    for i in range(n):
        if B * dv[i] * dv[i + 1] >= INT64_SAFE:
            return False
    # coordinate box from the adjugate diagonal: x_j^2 <= B * adj_jj / det
    box = []
    for j in range(n):
        minor = [[G[a][b] for b in range(n) if b != j] for a in range(n) if a != j]
        adj = _det(minor) if n > 1 else 1
        box.append(math.isqrt(B * adj // det + 1) + 1)
    for i in range(n):
        tot = sum(abs(U[i][j]) * box[j] for j in range(i, n))
        if tot >= 2**31 or tot * tot >= INT64_SAFE:
            return False
    return True


def _det(M) -> int:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    _, dv = _bareiss_any(M)
    return dv[-1]


def _bareiss_any(G):
    n = len(G)
    A = [list(map(int, row)) for row in G]
    dv = [1]
    sign = 1
    for k in range(n):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return A, [1] + [0] * n
        piv = A[k][k]
        prev = dv[-1]
        dv.append(piv)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (piv * A[i][j] - A[i][k] * A[k][j]) // prev
    dv[-1] *= sign
    return A, dv


def integer_short_vectors(G: Sequence[Sequence[int]], B: int, reduce: bool = True,
                          use_numba: bool | None = None) -> list[tuple[tuple[int, ...], int]]:
    """All nonzero ``x`` (one per +- pair) with ``x^T G x <= B`` for integer PD ``G``.

    Output is sorted by (value, coordinates) with the first nonzero coordinate
    of each vector made positive.
    """
    n = len(G)
    G = [[int(v) for v in row] for row in G]
    if B < 1:
        bareiss(G)  # still validate definiteness
        return []
    if reduce and n > 1:
        T, H = lll_gram(G)
    else:
        T, H = [[int(i == j) for j in range(n)] for i in range(n)], G
    U, dv = bareiss(H)
    if use_numba is None:
        use_numba = numba_enabled()
    use_numba = use_numba and walk_numba is not None and _fits_int64(U, dv, B, H)
    raw = _walk(U, dv, B, use_numba)
    if use_numba:
        fast = _postprocess_int64(raw, T)
        if fast is not None:
            return fast
    out = []
    for row in raw:
        y = [int(v) for v in row[:n]]
        x = [sum(T[i][j] * y[j] for j in range(n)) for i in range(n)]
        for v in x:
            if v:
                if v < 0:
                    x = [-c for c in x]
                break
        out.append((tuple(x), int(row[n])))
    out.sort(key=lambda item: (item[1], item[0]))
    return out


def _postprocess_int64(raw, T):
    """Vectorized change of basis, sign normalization and sort; None if int64 could overflow."""
    n = len(T)
    if len(raw) == 0:
        return []
    Y = raw[:, :n]
    tmax = max(abs(v) for row in T for v in row)
    if int(np.abs(Y).max()) * tmax * n >= INT64_SAFE:
        return None
    X = Y @ np.array(T, dtype=np.int64).T
    first = X[np.arange(len(X)), (X != 0).argmax(axis=1)]
    X[first < 0] *= -1
    vals = raw[:, n]
    order = np.lexsort(tuple(X[:, j] for j in reversed(range(n))) + (vals,))
    return [(tuple(x), v) for x, v in zip(X[order].tolist(), vals[order].tolist())]


def _scale_to_int(gram, bound=None):
    M = _as_fraction_matrix(gram)
    L = 1 if bound is None else Fraction(bound).denominator
    for row in M:
        for v in row:
            L = math.lcm(L, v.denominator)
    return [[int(v * L) for v in row] for row in M], L


def minimal_vectors(gram, use_numba: bool | None = None) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Minimum of a PD rational Gram matrix and its minimal vectors (one per +- pair)."""
    Gi, L = _scale_to_int(gram)
    n = len(Gi)
    T, H = lll_gram(Gi) if n > 1 else ([[1]], Gi)
    B = min(H[i][i] for i in range(n))
    found = integer_short_vectors(H, B, reduce=False, use_numba=use_numba)
    m = found[0][1]
    out = []
    for y, v in found:
        if v != m:
            break
        x = [sum(T[i][j] * y[j] for j in range(n)) for i in range(n)]
        if next(c for c in x if c) < 0:
            x = [-c for c in x]
        out.append(tuple(x))
    return Fraction(m, L), sorted(out)


def short_vectors(gram, bound, reduce: bool = True,
                  use_numba: bool | None = None) -> list[tuple[tuple[int, ...], Fraction]]:
    """Rational-Gram front end of :func:`integer_short_vectors`.

    Returns ``(x, value)`` for every nonzero integer ``x`` (one per +- pair)
    with ``x^T gram x <= bound``.
    """
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    Gi, L = _scale_to_int(gram, bound)
    Bi = int(bound * L)
    return [(x, Fraction(v, L)) for x, v in integer_short_vectors(Gi, Bi, reduce, use_numba)]


def is_positive_definite_gram(gram) -> bool:
    M = _as_fraction_matrix(gram)
    L = 1
    for row in M:
        for v in row:
            L = math.lcm(L, v.denominator)
    try:
        bareiss([[int(v * L) for v in row] for row in M])
    except NotPositiveDefinite:
        return False
    return True
