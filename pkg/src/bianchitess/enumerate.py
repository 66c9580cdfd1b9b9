"""Minimum and minimal vectors of positive definite binary Hermitian forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotPositiveDefinite
from .hermitian import ColumnVector, HermitianForm, gram_z4, is_positive_definite
from .lattice import minimal_vectors, short_vectors

__all__ = ["MinimalData", "vectors_below", "minimal_data", "orbit_key"]


def vectors_below(gram, bound) -> list[tuple[tuple[int, ...], Fraction]]:
    """Nonzero integer 4-vectors (one per +- pair) with ``x^T gram x <= bound``, with values."""
    if len(gram) != 4 or any(len(row) != 4 for row in gram):
        raise ValueError("expected a 4x4 Gram matrix")
    return short_vectors(gram, bound)


def orbit_key(v: ColumnVector) -> tuple[int, int, int, int]:
    """Lexicographically least integer coordinates in the unit orbit of ``v``."""
    return min(v.scale(u).int_coords() for u in v.ctx.units)


@dataclass(frozen=True)
class MinimalData:
    minimum: Fraction
    vectors: tuple[ColumnVector, ...]
    orbit_representatives: tuple[ColumnVector, ...]

    def __len__(self):
        return len(self.vectors)


def minimal_data(phi: HermitianForm) -> MinimalData:
    if not is_positive_definite(phi):
        raise NotPositiveDefinite(f"{phi} is not positive definite")
    ctx = phi.ctx
    m, found = minimal_vectors(gram_z4(phi))
    reps: dict[tuple, ColumnVector] = {}
    for x in found:
        v = ColumnVector.from_ints(ctx, x)
        key = orbit_key(v)
        if key not in reps:
            reps[key] = ColumnVector.from_ints(ctx, key)
    orbit = [reps[k] for k in sorted(reps)]
    full = {}
    for v in orbit:
        for u in ctx.units:
            w = v.scale(u)
            full[w.int_coords()] = w
    vectors = tuple(full[k] for k in sorted(full))
    return MinimalData(m, vectors, tuple(orbit))
