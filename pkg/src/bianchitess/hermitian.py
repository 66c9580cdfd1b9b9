"""Binary Hermitian forms over an imaginary quadratic field.

A form is stored as ``(a, b, c)`` with ``a, c`` rational and ``b`` in F, and

    phi(p, r) = a*N(p) + Tr(b * p * conj(r)) + c*N(r).

Its Hermitian matrix (for ``v* A v``) is ``[[a, conj(b)], [b, c]]``.  The
four-dimensional form space uses coordinates ``(a, b1, b2, c)`` where
``b = b1 + b2*sqrt(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import NotUnimodular, ZeroVector
from .qfield import AlgebraicNum, FieldContext


class FormSpaceVector(NamedTuple):
    """A point ``(a, b1, b2, c)`` of the rational form space (possibly indefinite)."""

    a: Fraction
    b1: Fraction
    b2: Fraction
    c: Fraction

    def scaled(self, s) -> "FormSpaceVector":
        return FormSpaceVector(self.a * s, self.b1 * s, self.b2 * s, self.c * s)

    def primitive(self) -> tuple[int, int, int, int]:
        """Integer multiple with coprime entries (positive scaling only)."""
        from math import gcd, lcm

        den = 1
        for v in self:
            den = lcm(den, Fraction(v).denominator)
        ints = [int(Fraction(v) * den) for v in self]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return tuple(v // g for v in ints) if g else (0, 0, 0, 0)


class HermitianForm:
    __slots__ = ("a", "b", "c", "ctx")

    def __init__(self, a, b, c, ctx: FieldContext | None = None):
        if ctx is None:
            ctx = b.ctx
        if not isinstance(b, AlgebraicNum):
            b = ctx(b)
        self.a = Fraction(a)
        self.b = b
        self.c = Fraction(c)
        self.ctx = ctx

    @classmethod
    def from_vector(cls, ctx: FieldContext, v: Iterable) -> "HermitianForm":
        a, b1, b2, c = v
        return cls(a, ctx.from_sqrtd(b1, b2), c, ctx)

    @classmethod
    def identity(cls, ctx: FieldContext) -> "HermitianForm":
        return cls(1, ctx.zero, 1, ctx)

    def vector(self) -> FormSpaceVector:
        b1, b2 = self.b.sqrtd_coords()
        return FormSpaceVector(self.a, b1, b2, self.c)

    def __add__(self, other: "HermitianForm") -> "HermitianForm":
        return HermitianForm(self.a + other.a, self.b + other.b, self.c + other.c, self.ctx)

    def __sub__(self, other: "HermitianForm") -> "HermitianForm":
        return HermitianForm(self.a - other.a, self.b - other.b, self.c - other.c, self.ctx)

    def __mul__(self, s) -> "HermitianForm":
        s = Fraction(s)
        return HermitianForm(self.a * s, self.b * s, self.c * s, self.ctx)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HermitianForm):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.c == other.c

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def determinant(self) -> Fraction:
        return self.a * self.c - self.b.norm()

    def matrix(self) -> list[list[AlgebraicNum]]:
        ctx = self.ctx
        return [[ctx(self.a), self.b.conj()], [self.b, ctx(self.c)]]

    def __repr__(self) -> str:
        return f"HermitianForm(a={self.a}, b={self.b}, c={self.c})"


class ColumnVector:
    """A column vector ``(p, r)`` in F^2, usually integral."""

    __slots__ = ("p", "r")

    def __init__(self, p: AlgebraicNum, r: AlgebraicNum):
        self.p = p
        self.r = r

    @property
    def ctx(self) -> FieldContext:
        return self.p.ctx

    @classmethod
    def from_ints(cls, ctx: FieldContext, coords) -> "ColumnVector":
        px, py, rx, ry = coords
        return cls(ctx(px, py), ctx(rx, ry))

    @classmethod
    def of(cls, ctx: FieldContext, p, r) -> "ColumnVector":
        p = p if isinstance(p, AlgebraicNum) else ctx(p)
        r = r if isinstance(r, AlgebraicNum) else ctx(r)
        return cls(p, r)

    def int_coords(self) -> tuple[int, int, int, int]:
        return self.p.int_coords() + self.r.int_coords()

    def is_zero(self) -> bool:
        return not self.p and not self.r

    def scale(self, u: AlgebraicNum) -> "ColumnVector":
        return ColumnVector(u * self.p, u * self.r)

    def __neg__(self):
        return ColumnVector(-self.p, -self.r)

    def __eq__(self, other):
        if not isinstance(other, ColumnVector):
            return NotImplemented
        return self.p == other.p and self.r == other.r

    def __hash__(self):
        return hash((self.p, self.r))

    def __iter__(self):
        yield self.p
        yield self.r

    def __repr__(self) -> str:
        return f"({self.p}, {self.r})"


class UnimodularMatrix:
    """A 2x2 matrix over F; ``UnimodularMatrix.checked`` enforces GL2(O) membership."""

    __slots__ = ("m", "ctx")

    def __init__(self, rows, ctx: FieldContext):
        self.ctx = ctx
        self.m = tuple(tuple(e if isinstance(e, AlgebraicNum) else ctx(e) for e in row) for row in rows)

    @classmethod
    def checked(cls, rows, ctx: FieldContext) -> "UnimodularMatrix":
        g = cls(rows, ctx)
        if not g.is_unimodular():
            raise NotUnimodular(f"{g} is not in GL2(O)")
        return g

    @classmethod
    def identity(cls, ctx: FieldContext) -> "UnimodularMatrix":
        return cls([[1, 0], [0, 1]], ctx)

    def det(self) -> AlgebraicNum:
        (a, b), (c, d) = self.m
        return a * d - b * c

    def is_integral(self) -> bool:
        return all(e.is_integral() for row in self.m for e in row)

    def is_unimodular(self) -> bool:
        if not self.is_integral():
            return False
        det = self.det()
        return any(det == u for u in self.ctx.units)

    def __matmul__(self, other):
        if isinstance(other, ColumnVector):
            (a, b), (c, d) = self.m
            return ColumnVector(a * other.p + b * other.r, c * other.p + d * other.r)
        (a, b), (c, d) = self.m
        (e, f), (g, h) = other.m
        return UnimodularMatrix([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]], self.ctx)

    def inverse(self) -> "UnimodularMatrix":
        (a, b), (c, d) = self.m
        det = self.det()
        inv = det.inverse()
        return UnimodularMatrix([[d * inv, -b * inv], [-c * inv, a * inv]], self.ctx)

    def is_identity(self) -> bool:
        (a, b), (c, d) = self.m
        return a == 1 and d == 1 and not b and not c

    def is_scalar(self) -> bool:
        (a, b), (c, d) = self.m
        return not b and not c and a == d

    def __eq__(self, other):
        if not isinstance(other, UnimodularMatrix):
            return NotImplemented
        return self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def order(self, cap: int = 48) -> int:
        g = self
        for k in range(1, cap + 1):
            if g.is_identity():
                return k
            g = g @ self
        return 0  # infinite or beyond cap

    def omega_coords(self) -> list[list[list[int]]]:
        """Entries as integer ``[x, y]`` pairs (``x + y*omega``), row-major."""
        return [[list(e.int_coords()) for e in row] for row in self.m]

    def __repr__(self) -> str:
        return "[" + "; ".join(", ".join(str(e) for e in row) for row in self.m) + "]"


# ---------------------------------------------------------------------------
# operations


def evaluate(phi: HermitianForm, v: ColumnVector) -> Fraction:
    p, r = v.p, v.r
    return phi.a * p.norm() + (phi.b * p * r.conj()).trace() + phi.c * r.norm()


def hermitian_product(phi: HermitianForm, v: ColumnVector, w: ColumnVector) -> AlgebraicNum:
    """``w* A v``; equals ``evaluate(phi, v)`` when ``w == v``."""
    a = phi.ctx(phi.a)
    c = phi.ctx(phi.c)
    first = a * v.p + phi.b.conj() * v.r
    second = phi.b * v.p + c * v.r
    return w.p.conj() * first + w.r.conj() * second


def rank_one(v: ColumnVector) -> FormSpaceVector:
    """The form-space point of ``v v*``, normalized so that pairing with it evaluates at ``v``."""
    if v.is_zero():
        raise ZeroVector("rank_one of the zero vector")
    beta = v.p.conj() * v.r
    b1, b2 = beta.sqrtd_coords()
    return FormSpaceVector(v.p.norm(), b1, b2, v.r.norm())


def trace_pairing(phi, psi, d: int | None = None) -> Fraction:
    """``a a' + c c' + Tr(b conj(b'))`` for forms or form-space vectors."""
    if isinstance(phi, HermitianForm):
        d = phi.ctx.d
        phi = phi.vector()
    if isinstance(psi, HermitianForm):
        d = psi.ctx.d
        psi = psi.vector()
    if d is None:
        raise ValueError("field discriminant needed to pair two raw vectors")
    return phi[0] * psi[0] + phi[3] * psi[3] + 2 * phi[1] * psi[1] - 2 * d * phi[2] * psi[2]


def gram_z4(phi: HermitianForm) -> list[list[Fraction]]:
    """Gram matrix on Z^4 in the basis ((1,0), (omega,0), (0,1), (0,omega))."""
    ctx = phi.ctx
    t, n = ctx.trace_omega, ctx.norm_omega
    a, c, b = phi.a, phi.c, phi.b
    om = ctx.omega
    half = Fraction(1, 2)
    x00 = b.trace() * half
    x01 = (b * om.conj()).trace() * half
    x10 = (b * om).trace() * half
    x11 = n * b.trace() * half
    return [
        [a, a * t * half, x00, x01],
        [a * t * half, a * n, x10, x11],
        [x00, x10, c, c * t * half],
        [x01, x11, c * t * half, c * n],
    ]


def pull_back(gamma: UnimodularMatrix, phi: HermitianForm) -> HermitianForm:
    """The form ``v -> phi(gamma v)``."""
    if not gamma.is_unimodular():
        raise NotUnimodular(f"{gamma} is not in GL2(O)")
    return _pull_back(gamma, phi)


def _pull_back(gamma: UnimodularMatrix, phi: HermitianForm) -> HermitianForm:
    (g11, g12), (g21, g22) = gamma.m
    A = phi.matrix()
    # gamma* A gamma; only the (1,1), (2,1), (2,2) entries are needed
    Ag = [
        [A[0][0] * g11 + A[0][1] * g21, A[0][0] * g12 + A[0][1] * g22],
        [A[1][0] * g11 + A[1][1] * g21, A[1][0] * g12 + A[1][1] * g22],
    ]
    a = g11.conj() * Ag[0][0] + g21.conj() * Ag[1][0]
    b = g12.conj() * Ag[0][0] + g22.conj() * Ag[1][0]
    c = g12.conj() * Ag[0][1] + g22.conj() * Ag[1][1]
    return HermitianForm(a.x, b, c.x, phi.ctx)


def is_positive_definite(phi: HermitianForm) -> bool:
    return phi.a > 0 and phi.determinant() > 0


def form_from_generators(ctx: FieldContext, gens) -> HermitianForm | None:
    """The unique form pairing to 1 with every generator, or None if not unique/consistent."""
    from .linalg import solve_rational

    rows = [[g[0], 2 * g[1], -2 * ctx.d * g[2], g[3]] for g in gens]
    sol = solve_rational(rows, [Fraction(1)] * len(rows))
    if sol is None:
        return None
    return HermitianForm.from_vector(ctx, sol)
