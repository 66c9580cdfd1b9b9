"""Slow independent reference computations used by the tests."""

import math
import random
from fractions import Fraction
from itertools import product


def inverse(G):
    n = len(G)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def quad(G, x):
    return sum(G[i][j] * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))


def brute_force_below(G, bound):
    """Box search using |x_i| <= sqrt(bound * (G^-1)_ii)."""
    bound = Fraction(bound)
    Ginv = inverse(G)
    n = len(G)
    r = [math.isqrt(int(bound * Ginv[i][i])) + 1 for i in range(n)]
    L = math.lcm(bound.denominator, *(Fraction(v).denominator for row in G for v in row))
    Gi = [[int(Fraction(v) * L) for v in row] for row in G]
    Bi = int(bound * L)
    out = []
    for x in product(*(range(-k, k + 1) for k in r)):
        if not any(x):
            continue
        if next(v for v in x if v) < 0:
            continue
        val = sum(Gi[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        if val <= Bi:
            out.append((x, Fraction(val, L)))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def random_pd_gram(rng: random.Random, n=4, entry=3, den=4):
    while True:
        M = [[rng.randint(-entry, entry) for _ in range(n)] for _ in range(n)]
        shift = [rng.randint(1, 3) for _ in range(n)]
        G = [[sum(M[k][i] * M[k][j] for k in range(n)) + (i == j) * shift[i] for j in range(n)]
             for i in range(n)]
        q = Fraction(rng.randint(1, den), rng.randint(1, den))
        G = [[Fraction(v) * q for v in row] for row in G]
        # positive definite iff all leading minors positive
        if all(_det([row[:k] for row in G[:k]]) > 0 for k in range(1, n + 1)):
            return G


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


def gram_by_polarization(evaluate_on):
    """Recover a 4x4 Gram matrix from values on basis vectors and their pairwise sums."""
    e = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    G = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        G[i][i] = Fraction(evaluate_on(e[i]))
    for i in range(4):
        for j in range(i + 1, 4):
            s = tuple(a + b for a, b in zip(e[i], e[j]))
            G[i][j] = G[j][i] = (Fraction(evaluate_on(s)) - G[i][i] - G[j][j]) / 2
    return G


def complex_value(phi, p, r):
    """Evaluate a Hermitian form numerically through the complex embedding."""
    a, c = float(phi.a), float(phi.c)
    b = phi.b.to_complex()
    P, R = p.to_complex(), r.to_complex()
    return (a * abs(P) ** 2 + 2 * (b * P * R.conjugate()).real + c * abs(R) ** 2)


def random_unimodular(ctx, rng: random.Random, steps=4, size=2):
    """Random product of elementary, diagonal-unit and swap matrices."""
    from bianchitess.hermitian import UnimodularMatrix

    one, zero = ctx.one, ctx.zero
    g = UnimodularMatrix.identity(ctx)
    for _ in range(steps):
        kind = rng.randrange(4)
        x = ctx(rng.randint(-size, size), rng.randint(-size, size))
        if kind == 0:
            m = [[one, x], [zero, one]]
        elif kind == 1:
            m = [[one, zero], [x, one]]
        elif kind == 2:
            m = [[rng.choice(ctx.units), zero], [zero, one]]
        else:
            m = [[zero, one], [one, zero]]
        g = g @ UnimodularMatrix(m, ctx)
    return g


def random_element(ctx, rng: random.Random, size=3):
    return ctx(rng.randint(-size, size), rng.randint(-size, size))
