"""Voronoi's algorithm for binary Hermitian forms over imaginary quadratic fields.

Perfect forms are normalized to minimum 1.  The cone of a perfect form is
spanned by the rank-one points ``v v*`` of its minimal vectors; neighbours
are found by walking from the form along a facet normal until new minimal
vectors appear.  Everything is exact rational arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .enumerate import MinimalData, minimal_data
from .errors import (
    DegenerateCandidate,
    DegenerateCone,
    NonterminatingStep,
    NotAFacet,
    SearchExhausted,
)
from .hermitian import (
    ColumnVector,
    FormSpaceVector,
    HermitianForm,
    UnimodularMatrix,
    _pull_back,
    gram_z4,
    hermitian_product,
    is_positive_definite,
    rank_one,
)
from .lattice import short_vectors
from .linalg import nullspace, primitive_int, rank
from .qfield import AlgebraicNum, FieldContext

log = logging.getLogger(__name__)

REQUIRED = ((1, 0, 0, 0), (0, 0, 1, 0), (1, 0, 1, 0))  # (1,0), (0,1), (1,1)


# ---------------------------------------------------------------------------
# initial form search


def _candidate_terms(ctx: FieldContext, p: AlgebraicNum, r: AlgebraicNum):
    a1, a2 = p.sqrtd_coords()
    b1, b2 = r.sqrtd_coords()
    d = ctx.d
    num = 1 - a1 * a1 + a2 * a2 * d + a1 * b1 - a2 * d * b2 - b1 * b1 + b2 * b2 * d
    den = 2 * d * (a2 * b1 - a1 * b2)
    if den == 0:
        raise DegenerateCandidate(f"({p}, {r}) gives no condition on beta")
    return num, den


def beta_from_candidate(ctx: FieldContext, p: AlgebraicNum, r: AlgebraicNum) -> AlgebraicNum:
    """The off-diagonal entry ``beta`` (real part -1/2) making ``(1, beta, 1)`` take value 1 at ``(p, r)``."""
    num, den = _candidate_terms(ctx, p, r)
    return ctx.from_sqrtd(Fraction(-1, 2), num / den)


def candidate_bound_value(ctx: FieldContext, p: AlgebraicNum, r: AlgebraicNum) -> Fraction:
    """``-d * num^2 / den^2``; positive definiteness of the search form needs this below 3/4."""
    num, den = _candidate_terms(ctx, p, r)
    return -num * num * ctx.d / (den * den)


def candidate_admissible(ctx: FieldContext, p: AlgebraicNum, r: AlgebraicNum) -> bool:
    return candidate_bound_value(ctx, p, r) < Fraction(3, 4)


def integers_of_norm_at_most(ctx: FieldContext, K: int) -> list[AlgebraicNum]:
    """All ``x + y*omega`` in O with norm <= K."""
    t, n = ctx.trace_omega, ctx.norm_omega
    # N = (x + t y / 2)^2 + (n - t^2/4) y^2
    ymax = isqrt(4 * K // (4 * n - t * t)) + 1
    out = []
    for y in range(-ymax, ymax + 1):
        xmax = isqrt(K) + abs(y) + 1
        for x in range(-xmax, xmax + 1):
            if x * x + t * x * y + n * y * y <= K:
                out.append(ctx(x, y))
    return out


def _search_candidates(ctx: FieldContext, cap: int, floor: int):
    elems = integers_of_norm_at_most(ctx, cap)
    cands = []
    for p in elems:
        np_ = p.norm()
        for r in elems:
            m = max(np_, r.norm(), (p - r).norm())
            if floor < m <= cap:
                cands.append((m, p.int_coords() + r.int_coords(), p, r))
    cands.sort(key=lambda c: (c[0], c[1]))
    return cands


def initial_perfect_form(ctx: FieldContext, start_cap: int = 4, max_cap: int = 1 << 14) -> "PerfectForm":
    """Brute-force search for a perfect form with (1,0), (0,1), (1,1) minimal."""
    cap, floor = start_cap, -1
    while cap <= max_cap:
        for _, _, p, r in _search_candidates(ctx, cap, floor):
            try:
                if not candidate_admissible(ctx, p, r):
                    continue
            except DegenerateCandidate:
                continue
            beta = beta_from_candidate(ctx, p, r)
            phi = HermitianForm(1, beta, 1, ctx)
            md = minimal_data(phi)
            if md.minimum != 1:
                continue
            have = {v.int_coords() for v in md.vectors}
            need = list(REQUIRED) + [p.int_coords() + r.int_coords()]
            if not all(x in have for x in need):
                continue
            pf = PerfectForm.from_form(phi, md)
            if pf is None:
                continue
            pf.search_candidate = ColumnVector(p, r)
            log.debug("d=%s initial form %s from candidate (%s, %s)", ctx.d, phi, p, r)
            return pf
        floor, cap = cap, cap * 2
    raise SearchExhausted(f"no initial perfect form found for d={ctx.d} up to norm {max_cap}")


# ---------------------------------------------------------------------------
# perfect forms and facets


def _euclid(g: FormSpaceVector, d: int) -> tuple[int, ...]:
    """Integer coordinates in which the trace pairing becomes the dot product."""
    return primitive_int((g.a, 2 * g.b1, -2 * d * g.b2, g.c))


@dataclass
class FacetData:
    normal: FormSpaceVector
    generator_subset: tuple[int, ...]

    def as_form(self, ctx: FieldContext) -> HermitianForm:
        return HermitianForm.from_vector(ctx, self.normal)


@dataclass
class PerfectForm:
    form: HermitianForm
    minimal: MinimalData
    cone_generators: tuple[FormSpaceVector, ...]
    generator_vectors: tuple[ColumnVector, ...]
    _facets: list[FacetData] | None = field(default=None, repr=False)
    search_candidate: ColumnVector | None = field(default=None, repr=False)

    @property
    def ctx(self) -> FieldContext:
        return self.form.ctx

    @classmethod
    def from_form(cls, phi: HermitianForm, md: MinimalData | None = None) -> "PerfectForm | None":
        """Wrap ``phi`` (minimum must be 1); None if it is not perfect."""
        md = md or minimal_data(phi)
        if md.minimum != 1:
            raise ValueError(f"form has minimum {md.minimum}, expected 1")
        gens, vecs = [], []
        seen = set()
        for v in md.orbit_representatives:
            g = rank_one(v)
            if g in seen:
                continue
            seen.add(g)
            gens.append(g)
            vecs.append(v)
        if rank(gens) < 4:
            return None
        return cls(phi, md, tuple(gens), tuple(vecs))

    @property
    def facets(self) -> list[FacetData]:
        if self._facets is None:
            self._facets = compute_facets(self)
        return self._facets

    def invariant(self) -> tuple:
        """Cheap GL2(O)-invariant used to bucket equivalence tests."""
        return (self.form.determinant(), len(self.minimal.vectors), len(self.cone_generators))


def is_perfect(phi: HermitianForm, md: MinimalData) -> bool:
    return rank([rank_one(v) for v in md.orbit_representatives]) == 4


def _dot(h, g) -> int:
    return h[0] * g[0] + h[1] * g[1] + h[2] * g[2] + h[3] * g[3]


def _normalize(h) -> tuple[int, ...]:
    g = 0
    for v in h:
        g = gcd(g, v)
    return tuple(v // g for v in h)


def cone_facets(gens: list[tuple[int, ...]]) -> list[tuple[tuple[int, ...], frozenset]]:
    """Facets of the pointed cone spanned by integer rays (double description method).

    Returns ``(normal, incident index set)`` with ``normal . g >= 0`` for all rays.
    """
    n = 4
    basis: list[int] = []
    for i in range(len(gens)):
        if rank([gens[j] for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
            if len(basis) == n:
                break
    if len(basis) < n:
        raise DegenerateCone("generators do not span the form space")

    facets: list[tuple[tuple[int, ...], set]] = []
    for k in basis:
        others = [gens[j] for j in basis if j != k]
        (ns,) = nullspace(others, n)
        h = list(primitive_int(ns))
        if _dot(h, gens[k]) < 0:
            h = [-v for v in h]
        facets.append((tuple(h), {j for j in basis if j != k}))

    processed = list(basis)
    for idx in range(len(gens)):
        if idx in basis:
            continue
        g = gens[idx]
        vals = [_dot(h, g) for h, _ in facets]
        pos = [f for f, v in zip(facets, vals) if v > 0]
        zero = [f for f, v in zip(facets, vals) if v == 0]
        neg = [f for f, v in zip(facets, vals) if v < 0]
        new = []
        for hp, zp in pos:
            vp = _dot(hp, g)
            for hn, zn in neg:
                Z = zp & zn
                if len(Z) < n - 2:
                    continue
                if any(Z <= zo for ho, zo in facets if ho is not hp and ho is not hn):
                    continue
                vn = _dot(hn, g)
                h = _normalize([vp * a - vn * b for a, b in zip(hn, hp)])
                new.append((h, Z | {idx}))
        facets = pos + [(h, z | {idx}) for h, z in zero] + new
        processed.append(idx)

    out = []
    for h, _ in facets:
        inc = frozenset(j for j, g in enumerate(gens) if _dot(h, g) == 0)
        out.append((h, inc))
    return out


def compute_facets(pf: PerfectForm) -> list[FacetData]:
    d = pf.ctx.d
    gens = [_euclid(g, d) for g in pf.cone_generators]
    if rank(gens) < 4:
        raise DegenerateCone("cone generators have rank < 4")
    facets = []
    for h, inc in cone_facets(gens):
        # the Euclidean coordinates were chosen so that h is already the
        # form-space normal under the trace pairing
        normal = FormSpaceVector(*(Fraction(v) for v in h))
        if rank([gens[j] for j in inc]) != 3:
            raise DegenerateCone("facet incidence does not span a hyperplane")
        facets.append(FacetData(normal, tuple(sorted(inc))))
    facets.sort(key=lambda f: tuple(f.normal))
    return facets


# ---------------------------------------------------------------------------
# neighbours


def _quad(G, x) -> Fraction:
    s = Fraction(0)
    for i in range(4):
        if x[i]:
            row = G[i]
            s += x[i] * sum(row[j] * x[j] for j in range(4) if x[j])
    return s


def neighbor(pf: PerfectForm, facet: FacetData, max_iter: int = 200) -> PerfectForm:
    """The perfect form across ``facet``, normalized to minimum 1."""
    ctx = pf.ctx
    psi = facet.as_form(ctx)
    on = [pf.cone_generators[i] for i in facet.generator_subset]
    from .hermitian import trace_pairing

    if any(trace_pairing(psi, g) != 0 for g in on) or any(
        trace_pairing(psi, g) <= 0
        for i, g in enumerate(pf.cone_generators)
        if i not in facet.generator_subset
    ):
        raise NotAFacet("facet normal does not support the cone")

    phi = pf.form
    Gphi = gram_z4(phi)
    Gpsi = gram_z4(psi)

    lo, hi = Fraction(0), Fraction(1)
    for _ in range(max_iter):
        cand = phi + psi * hi
        if not is_positive_definite(cand):
            hi = (lo + hi) / 2
            continue
        sv = short_vectors(gram_z4(cand), 1)
        if sv[0][1] == 1 and all(_quad(Gpsi, x) == 0 for x, v in sv if v == 1):
            lo, hi = hi, 2 * hi
            continue
        break
    else:
        raise NonterminatingStep("could not bracket the neighbour parameter")

    for _ in range(max_iter):
        sv = short_vectors(gram_z4(phi + psi * hi), 1)
        viol = [x for x, v in sv if v < 1]
        if not viol:
            break
        hi = min((1 - _quad(Gphi, x)) / _quad(Gpsi, x) for x in viol)
    else:
        raise NonterminatingStep("neighbour iteration did not converge")

    new_form = phi + psi * hi
    result = PerfectForm.from_form(new_form)
    if result is None:
        raise NonterminatingStep("neighbour form is not perfect")
    shared = set(on)
    if not shared <= set(result.cone_generators):
        raise NotAFacet("neighbour does not contain the shared facet")
    return result


# ---------------------------------------------------------------------------
# equivalence and stabilizers


def _independent_pair(vectors) -> tuple[ColumnVector, ColumnVector]:
    for i, v in enumerate(vectors):
        for w in vectors[i + 1:]:
            if v.p * w.r - v.r * w.p:
                return v, w
    raise DegenerateCone("minimal vectors do not span F^2")


def _solve_gamma(ctx, v1, v2, w1, w2, vinv) -> UnimodularMatrix:
    # gamma = W V^{-1}
    (i11, i12), (i21, i22) = vinv
    return UnimodularMatrix(
        [
            [w1.p * i11 + w2.p * i21, w1.p * i12 + w2.p * i22],
            [w1.r * i11 + w2.r * i21, w1.r * i12 + w2.r * i22],
        ],
        ctx,
    )


def _witnesses(pf1: PerfectForm, pf2: PerfectForm, first_only: bool) -> list[UnimodularMatrix]:
    ctx = pf1.ctx
    phi1, phi2 = pf1.form, pf2.form
    v1, v2 = _independent_pair(pf1.minimal.vectors)
    target = hermitian_product(phi1, v1, v2)
    det = v1.p * v2.r - v2.p * v1.r
    inv = det.inverse()
    vinv = ((v2.r * inv, -v2.p * inv), (-v1.r * inv, v1.p * inv))
    out = []
    M2 = pf2.minimal.vectors
    for w1 in M2:
        for w2 in M2:
            if w1 is w2:
                continue
            if hermitian_product(phi2, w1, w2) != target:
                continue
            g = _solve_gamma(ctx, v1, v2, w1, w2, vinv)
            if not g.is_unimodular():
                continue
            if _pull_back(g, phi2) == phi1:
                out.append(g)
                if first_only:
                    return out
    return out


def equivalence_witness(pf1: PerfectForm, pf2: PerfectForm) -> UnimodularMatrix | None:
    """``gamma`` in GL2(O) with ``pull_back(gamma, pf2.form) == pf1.form``, or None."""
    if pf1.invariant() != pf2.invariant():
        return None
    found = _witnesses(pf1, pf2, first_only=True)
    return found[0] if found else None


@dataclass
class Stabilizer:
    elements: tuple[UnimodularMatrix, ...]
    order: int
    cyclic: bool
    generator: UnimodularMatrix

    def element_orders(self) -> list[int]:
        return sorted(g.order() for g in self.elements)


def stabilizer(pf: PerfectForm) -> Stabilizer:
    elems = _witnesses(pf, pf, first_only=False)
    keys = set(elems)
    for g in elems:
        for h in elems:
            if g @ h not in keys:
                raise RuntimeError("stabilizer is not closed under multiplication")
    order = len(elems)
    orders = [(g.order(), i) for i, g in enumerate(elems)]
    best = max(orders, key=lambda t: (t[0], -t[1]))
    return Stabilizer(tuple(elems), order, best[0] == order, elems[best[1]])


# ---------------------------------------------------------------------------
# class enumeration


@dataclass
class Adjacency:
    facet: int
    neighbor_class: int
    witness: UnimodularMatrix  # pull_back(witness, classes[neighbor_class].form) == neighbour form


@dataclass
class PerfectFormGraph:
    ctx: FieldContext
    classes: list[PerfectForm]
    adjacency: list[list[Adjacency]]
    stabilizers: list[Stabilizer]


def find_class(pf: PerfectForm, classes: list[PerfectForm]) -> tuple[int, UnimodularMatrix] | None:
    for j, rep in enumerate(classes):
        g = equivalence_witness(pf, rep)
        if g is not None:
            return j, g
    return None


def enumerate_classes(ctx: FieldContext, initial: PerfectForm | None = None) -> PerfectFormGraph:
    """Breadth-first search of the Voronoi graph modulo GL2(O)."""
    start = initial if initial is not None else initial_perfect_form(ctx)
    classes = [start]
    adjacency: list[list[Adjacency]] = []
    i = 0
    while i < len(classes):
        pf = classes[i]
        row = []
        for fi, facet in enumerate(pf.facets):
            nb = neighbor(pf, facet)
            hit = find_class(nb, classes)
            if hit is None:
                classes.append(nb)
                hit = (len(classes) - 1, UnimodularMatrix.identity(ctx))
            row.append(Adjacency(fi, hit[0], hit[1]))
        adjacency.append(row)
        log.info("d=%s: processed class %d/%d", ctx.d, i + 1, len(classes))
        i += 1
    stabs = [stabilizer(pf) for pf in classes]
    return PerfectFormGraph(ctx, classes, adjacency, stabs)


def facet_partner(graph: PerfectFormGraph, i: int, fi: int) -> tuple[int, int]:
    """The facet of the neighbouring representative glued to facet ``fi`` of class ``i``."""
    pf = graph.classes[i]
    adj = graph.adjacency[i][fi]
    j, gamma = adj.neighbor_class, adj.witness
    rep = graph.classes[j]
    facet = pf.facets[fi]
    # rank-one points of the shared facet, carried into the representative's cone
    images = set()
    for k in facet.generator_subset:
        images.add(rank_one(gamma @ pf.generator_vectors[k]))
    index = {g: n for n, g in enumerate(rep.cone_generators)}
    if not all(g in index for g in images):
        raise NotAFacet("witness does not carry the shared facet into the neighbour")
    subset = tuple(sorted(index[g] for g in images))
    for fj, f in enumerate(rep.facets):
        if f.generator_subset == subset:
            return j, fj
    raise NotAFacet("image of shared facet is not a facet of the neighbour")


def gluing_failures(graph: PerfectFormGraph) -> list[tuple[int, int]]:
    """(class, facet) pairs whose glued partner does not lead back to the same class."""
    bad = []
    for i, pf in enumerate(graph.classes):
        for fi in range(len(pf.facets)):
            try:
                j, fj = facet_partner(graph, i, fi)
            except NotAFacet:
                bad.append((i, fi))
                continue
            back = neighbor(graph.classes[j], graph.classes[j].facets[fj])
            if equivalence_witness(back, pf) is None:
                bad.append((i, fi))
    return bad
