"""Exact arithmetic in an imaginary quadratic field F = Q(sqrt(d)).

Elements are stored as ``x + y*omega`` with rational ``x, y``, where

    omega = (1 + sqrt(d)) / 2   if d = 1 (mod 4)
    omega = sqrt(d)             otherwise,

so that the ring of integers is ``Z[omega]``.  Ideals of the ring of
integers are kept as Hermite normal form Z-bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence, Union

from .errors import NotNegative, NotSquareFree, ZeroIdeal
from .lattice import short_vectors

Rational = Union[int, Fraction]


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True, eq=False)
class FieldContext:
    d: int
    omega_mode: bool  # True iff omega = (1 + sqrt(d)) / 2
    discriminant: int
    trace_omega: int
    norm_omega: int
    units: tuple = field(default=(), repr=False)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.d == self.d

    def __hash__(self):
        return hash(("FieldContext", self.d))

    def __reduce__(self):
        return (make_context, (self.d,))

    # convenience constructors
    def __call__(self, x: Rational = 0, y: Rational = 0) -> "AlgebraicNum":
        return AlgebraicNum(Fraction(x), Fraction(y), self)

    @property
    def zero(self) -> "AlgebraicNum":
        return AlgebraicNum(Fraction(0), Fraction(0), self)

    @property
    def one(self) -> "AlgebraicNum":
        return AlgebraicNum(Fraction(1), Fraction(0), self)

    @property
    def omega(self) -> "AlgebraicNum":
        return AlgebraicNum(Fraction(0), Fraction(1), self)

    def from_sqrtd(self, u: Rational, v: Rational) -> "AlgebraicNum":
        """The element ``u + v*sqrt(d)``."""
        u, v = Fraction(u), Fraction(v)
        if self.omega_mode:
            return AlgebraicNum(u - v, 2 * v, self)
        return AlgebraicNum(u, v, self)

    def is_unit(self, z: "AlgebraicNum") -> bool:
        return z.is_integral() and z.norm() == 1

    def __repr__(self) -> str:
        return f"FieldContext(d={self.d})"


@lru_cache(maxsize=None)
def make_context(d: int) -> FieldContext:
    """Validated context for ``Q(sqrt(d))`` with ``d < 0`` square-free."""
    d = int(d)
    if d >= 0:
        raise NotNegative(f"d must be negative, got {d}")
    if not is_squarefree(d):
        raise NotSquareFree(f"d = {d} is not square-free")
    omega_mode = d % 4 == 1
    if omega_mode:
        disc, t, n = d, 1, (1 - d) // 4
    else:
        disc, t, n = 4 * d, 0, -d
    ctx = FieldContext(d, omega_mode, disc, t, n)
    if d == -1:
        raw = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    elif d == -3:
        # omega^2 = omega - 1
        raw = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)]
    else:
        raw = [(1, 0), (-1, 0)]
    units = tuple(AlgebraicNum(Fraction(x), Fraction(y), ctx) for x, y in raw)
    object.__setattr__(ctx, "units", units)
    return ctx


class AlgebraicNum:
    """The element ``x + y*omega`` of F."""

    __slots__ = ("x", "y", "ctx")

    def __init__(self, x: Rational, y: Rational, ctx: FieldContext):
        self.x = x if type(x) is Fraction else Fraction(x)
        self.y = y if type(y) is Fraction else Fraction(y)
        self.ctx = ctx

    def _coerce(self, other) -> "AlgebraicNum":
        if isinstance(other, AlgebraicNum):
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicNum(Fraction(other), Fraction(0), self.ctx)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicNum(self.x + other.x, self.y + other.y, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicNum(self.x - other.x, self.y - other.y, self.ctx)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AlgebraicNum(-self.x, -self.y, self.ctx)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNum(self.x * other, self.y * other, self.ctx)
        if not isinstance(other, AlgebraicNum):
            return NotImplemented
        c = self.ctx
        yy = self.y * other.y
        return AlgebraicNum(
            self.x * other.x - c.norm_omega * yy,
            self.x * other.y + self.y * other.x + c.trace_omega * yy,
            c,
        )

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        cj = self.conj()
        return AlgebraicNum(cj.x / n, cj.y / n, self.ctx)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNum(self.x / other, self.y / other, self.ctx)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        result = self.ctx.one
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if isinstance(other, AlgebraicNum):
            return self.x == other.x and self.y == other.y and self.ctx.d == other.ctx.d
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def conj(self) -> "AlgebraicNum":
        return AlgebraicNum(self.x + self.ctx.trace_omega * self.y, -self.y, self.ctx)

    def norm(self) -> Fraction:
        c = self.ctx
        return self.x * self.x + c.trace_omega * self.x * self.y + c.norm_omega * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x + self.ctx.trace_omega * self.y

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def sqrtd_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates ``(u, v)`` with ``self = u + v*sqrt(d)``."""
        if self.ctx.omega_mode:
            return self.x + self.y / 2, self.y / 2
        return self.x, self.y

    @property
    def real(self) -> Fraction:
        return self.sqrtd_coords()[0]

    def coords(self) -> tuple[Fraction, Fraction]:
        return self.x, self.y

    def int_coords(self) -> tuple[int, int]:
        if not self.is_integral():
            raise ValueError(f"{self} is not integral")
        return int(self.x), int(self.y)

    def to_complex(self) -> complex:
        u, v = self.sqrtd_coords()
        return complex(float(u), float(v) * (-self.ctx.d) ** 0.5)

    def __repr__(self) -> str:
        return f"AlgebraicNum({self.x}, {self.y}, d={self.ctx.d})"

    def __str__(self) -> str:
        if not self.y:
            return str(self.x)
        if not self.x:
            head = ""
        else:
            head = f"{self.x}"
        y = self.y
        if y == 1:
            tail = "w"
        elif y == -1:
            tail = "-w"
        else:
            tail = f"{y}*w"
        if head and not tail.startswith("-"):
            return f"{head}+{tail}"
        return head + tail


def conj(z: AlgebraicNum) -> AlgebraicNum:
    return z.conj()


def norm(z: AlgebraicNum) -> Fraction:
    return z.norm()


def trace(z: AlgebraicNum) -> Fraction:
    return z.trace()


# ---------------------------------------------------------------------------
# class number


def reduced_forms(disc: int) -> list[tuple[int, int, int]]:
    """Reduced primitive positive definite forms ``(a, b, c)`` of discriminant ``disc``."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError(f"bad discriminant {disc}")
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def class_number(ctx: FieldContext) -> int:
    return len(reduced_forms(ctx.discriminant))


# ---------------------------------------------------------------------------
# ideals


def _hnf(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF ``(a, b, c)`` of the Z-span: basis ``(a, 0)`` and ``(b, c)``."""
    vecs = [list(v) for v in vectors if v[0] or v[1]]
    if not vecs:
        raise ZeroIdeal("ideal is zero")
    # Euclid on the omega coordinate
    while sum(1 for v in vecs if v[1]) > 1:
        nz = [v for v in vecs if v[1]]
        piv = min(nz, key=lambda v: abs(v[1]))
        for v in nz:
            if v is piv:
                continue
            q = v[1] // piv[1]
            v[0] -= q * piv[0]
            v[1] -= q * piv[1]
    rest = [v for v in vecs if not v[1]]
    top = [v for v in vecs if v[1]]
    a = 0
    for v in rest:
        a = gcd(a, v[0])
    if not top or a == 0:
        raise ZeroIdeal("generators do not span a full-rank ideal")
    b, c = top[0]
    if c < 0:
        b, c = -b, -c
    return a, b % a, c


@dataclass(frozen=True)
class IntegralIdeal:
    """Ideal ``a*Z + (b + c*omega)*Z`` of the ring of integers (HNF basis)."""

    a: int
    b: int
    c: int
    ctx: FieldContext = field(compare=False, repr=False)

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def hnf(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, 0), (self.b, self.c))

    def basis(self) -> tuple[AlgebraicNum, AlgebraicNum]:
        return self.ctx(self.a, 0), self.ctx(self.b, self.c)

    def contains(self, z: AlgebraicNum) -> bool:
        if not z.is_integral():
            return False
        x, y = z.int_coords()
        if y % self.c:
            return False
        return (x - (y // self.c) * self.b) % self.a == 0

    def conj(self) -> "IntegralIdeal":
        return ideal_from_generators([g.conj() for g in self.basis()])


def ideal_from_generators(gens: Sequence[AlgebraicNum]) -> IntegralIdeal:
    gens = list(gens)
    if not gens or not any(gens):
        raise ZeroIdeal("all generators are zero")
    ctx = gens[0].ctx
    vecs = []
    for g in gens:
        if not g.is_integral():
            raise ValueError(f"generator {g} is not integral")
        vecs.append(g.int_coords())
        vecs.append((g * ctx.omega).int_coords())
    a, b, c = _hnf(vecs)
    return IntegralIdeal(a, b, c, ctx)


def ideal_product(I: IntegralIdeal, J: IntegralIdeal) -> IntegralIdeal:
    return ideal_from_generators([x * y for x in I.basis() for y in J.basis()])


def principal_generator(I: IntegralIdeal) -> AlgebraicNum | None:
    """An element of ``I`` with norm ``norm(I)``, or None if ``I`` is not principal."""
    e1, e2 = I.basis()
    # norm form N(x*e1 + y*e2) as a binary Gram matrix
    g11 = e1.norm()
    g22 = e2.norm()
    g12 = (e1 * e2.conj()).trace() / 2
    target = I.norm
    for vec, val in short_vectors([[g11, g12], [g12, g22]], target):
        if val == target:
            return e1 * vec[0] + e2 * vec[1]
    return None


def is_principal(I: IntegralIdeal) -> bool:
    return principal_generator(I) is not None


def same_ideal_class(I: IntegralIdeal, J: IntegralIdeal) -> bool:
    return is_principal(ideal_product(I, J.conj()))
