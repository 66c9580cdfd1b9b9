"""Ideal polytopes attached to perfect forms.

Each perfect-form cone descends to an ideal polytope in hyperbolic 3-space
whose vertices are the cusps ``p/r`` of the minimal vectors.  Its
combinatorics is the face lattice of the cone: rays are vertices, facets of
the cone are 2-faces.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Sequence

from .errors import DegenerateCone, ZeroVector
from .hermitian import ColumnVector
from .qfield import AlgebraicNum, FieldContext, ideal_from_generators, same_ideal_class
from .voronoi import PerfectForm, PerfectFormGraph, cone_facets


@dataclass(frozen=True)
class Cusp:
    """The point ``p/r`` of P^1(F) with ``r`` a positive integer (``r == 0`` means infinity)."""

    p: AlgebraicNum
    r: int

    @property
    def is_infinity(self) -> bool:
        return self.r == 0

    def value(self) -> AlgebraicNum | None:
        return None if self.is_infinity else self.p / self.r

    def vector(self) -> ColumnVector:
        return ColumnVector(self.p, self.p.ctx(self.r))

    def sort_key(self) -> tuple:
        if self.is_infinity:
            return (0,)
        z = self.value()
        return (1, z.x, z.y)

    def to_complex(self) -> complex | None:
        return None if self.is_infinity else self.value().to_complex()

    def __str__(self) -> str:
        if self.is_infinity:
            return "oo"
        x, y = self.p.int_coords()
        num = _fmt_int_elem(x, y)
        if self.r == 1:
            return num
        if x and y:
            num = f"({num})"
        return f"{num}/{self.r}"


def _fmt_int_elem(x: int, y: int) -> str:
    if not y:
        return str(x)
    w = "w" if abs(y) == 1 else f"{abs(y)}w"
    if not x:
        return w if y > 0 else f"-{w}"
    return f"{x}{'+' if y > 0 else '-'}{w}"


def cusp_of(v: ColumnVector) -> Cusp:
    if v.is_zero():
        raise ZeroVector("zero vector has no cusp")
    ctx = v.ctx
    if not v.r:
        return Cusp(ctx.one, 0)
    z = v.p / v.r
    den = lcm(z.x.denominator, z.y.denominator)
    return Cusp(z * den, den)


# ---------------------------------------------------------------------------
# face lattice


@dataclass
class IdealPolytope:
    vertices: list[Cusp]
    facets: list[frozenset]  # vertex index sets, one per 2-face
    faces: dict[int, list[tuple[int, ...]]]
    f_vector: tuple[int, int, int]

    def incidence_matrix(self) -> list[list[bool]]:
        """Rows = vertices, columns = facets."""
        return [[i in f for f in self.facets] for i in range(len(self.vertices))]

    def euler_characteristic(self) -> int:
        v, e, f = self.f_vector
        return v - e + f

    def containments(self) -> list[tuple[int, int, int]]:
        """``(dim, i, j)``: face ``i`` of dimension ``dim`` lies in face ``j`` of dimension ``dim + 1``."""
        out = []
        for dim in (0, 1):
            for i, small in enumerate(self.faces[dim]):
                for j, big in enumerate(self.faces[dim + 1]):
                    if set(small) <= set(big):
                        out.append((dim, i, j))
        return out

    def facet_cycles(self) -> list[list[int]]:
        """Vertices of each 2-face in cyclic order along its boundary edges."""
        edges = [set(e) for e in self.faces[1]]
        cycles = []
        for f in self.facets:
            fe = [tuple(e) for e in edges if e <= f]
            adj: dict[int, list[int]] = {v: [] for v in f}
            for a, b in fe:
                adj[a].append(b)
                adj[b].append(a)
            start = min(f)
            cyc = [start]
            prev, cur = None, start
            while True:
                nxt = min(w for w in adj[cur] if w != prev)
                if nxt == start:
                    break
                cyc.append(nxt)
                prev, cur = cur, nxt
                if len(cyc) > len(f):
                    raise DegenerateCone("face boundary is not a cycle")
            cycles.append(cyc)
        return cycles


def face_lattice(facets: Sequence[frozenset]) -> dict[int, list[tuple[int, ...]]]:
    """Proper faces of a 3-polytope by dimension, from the vertex sets of its facets.

    Faces are the nonempty intersections of facets; in dimension three the
    non-facet ones are edges (two vertices) or vertices (one).
    """
    faces = set(frozenset(f) for f in facets)
    frontier = set(faces)
    while frontier:
        new = set()
        for a in frontier:
            for b in faces:
                c = a & b
                if c and c not in faces:
                    new.add(c)
        faces |= new
        frontier = new
    top = set(frozenset(f) for f in facets)
    by_dim: dict[int, list[tuple[int, ...]]] = {0: [], 1: [], 2: []}
    for f in faces:
        if f in top:
            k = 2
        elif len(f) == 1:
            k = 0
        elif len(f) == 2:
            k = 1
        else:
            raise DegenerateCone(f"intersection of facets {sorted(f)} is not a face of a 3-polytope")
        by_dim[k].append(tuple(sorted(f)))
    for k in by_dim:
        by_dim[k].sort()
    return by_dim


def f_vector_of(faces: dict[int, list]) -> tuple[int, int, int]:
    return (len(faces[0]), len(faces[1]), len(faces[2]))


def build_polytope(pf: PerfectForm) -> IdealPolytope:
    vertices = [cusp_of(v) for v in pf.generator_vectors]
    if len(set(vertices)) != len(vertices):
        raise DegenerateCone("distinct cone generators share a cusp")
    facets = [frozenset(f.generator_subset) for f in pf.facets]
    faces = face_lattice(facets)
    fv = f_vector_of(faces)
    if len(faces[0]) != len(vertices):
        raise DegenerateCone("some generator is not a vertex of the cone")
    return IdealPolytope(vertices, facets, faces, fv)


# ---------------------------------------------------------------------------
# canonical incidence keys


def _refine(colors: list, adj: list[list[int]]) -> list[int]:
    colors = list(colors)
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(len(adj))]
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_key(n_vertices: int, facets: Sequence[frozenset]) -> str:
    """Canonical string of the vertex-facet incidence graph (sides distinguished).

    Colour refinement with individualization; the minimum leaf certificate
    over the search tree is returned, so the key is a complete isomorphism
    invariant.
    """
    nf = len(facets)
    n = n_vertices + nf
    adj: list[list[int]] = [[] for _ in range(n)]
    for j, f in enumerate(facets):
        for v in f:
            adj[v].append(n_vertices + j)
            adj[n_vertices + j].append(v)
    start = _refine([(0 if v < n_vertices else 1, len(adj[v])) for v in range(n)], adj)
    best: list = [None]

    def certificate(colors):
        order = sorted(range(n), key=lambda v: colors[v])
        pos = {v: i for i, v in enumerate(order)}
        bits = []
        for v in order[:n_vertices]:
            row = sorted(pos[w] - n_vertices for w in adj[v])
            bits.append(tuple(row))
        return tuple(bits)

    def search(colors):
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                if target is None or len(cells[c]) < len(cells[target]):
                    target = c
        if target is None:
            cert = certificate(colors)
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        for v in cells[target]:
            ind = [(colors[w], 0 if w == v else 1) for w in range(n)]
            search(_refine(ind, adj))

    search(start)
    body = ";".join(",".join(map(str, row)) for row in best[0])
    return f"V{n_vertices}F{nf}:{body}"


# ---------------------------------------------------------------------------
# reference solids


def _facets_of_points(points) -> list[frozenset]:
    rays = [tuple(p) + (1,) for p in points]
    return [inc for _, inc in cone_facets(rays)]


def _reference_facets() -> dict[str, tuple[int, list[frozenset]]]:
    from itertools import permutations, product

    refs: dict[str, tuple[int, list[frozenset]]] = {}

    def add(name, points):
        refs[name] = (len(points), _facets_of_points(points))

    add("tetrahedron", [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    add("octahedron", [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    cubo = sorted({q for s in product((1, -1), repeat=2) for q in permutations((s[0], s[1], 0))})
    add("cuboctahedron", cubo)
    add("triangular prism", [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])
    # triangular cupola: hexagon h0..h5 below a triangle t0, t1, t2
    h = list(range(6))
    t0, t1, t2 = 6, 7, 8
    cupola = [
        frozenset(h),
        frozenset((t0, t1, t2)),
        frozenset((h[0], h[1], t1, t0)),
        frozenset((h[2], h[3], t2, t1)),
        frozenset((h[4], h[5], t0, t2)),
        frozenset((h[1], h[2], t1)),
        frozenset((h[3], h[4], t2)),
        frozenset((h[5], h[0], t0)),
    ]
    refs["hexagonal cap"] = (9, cupola)
    add("square pyramid", [(0, 0, 0), (2, 0, 0), (2, 2, 0), (0, 2, 0), (1, 1, 1)])
    trunc = sorted(
        {
            tuple(s * c for s, c in zip(signs, perm))
            for perm in permutations((3, 1, 1))
            for signs in product((1, -1), repeat=3)
            if signs.count(-1) % 2 == 0
        }
    )
    add("truncated tetrahedron", trunc)
    add("triangular dipyramid", [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)])
    return refs


TYPE_NAMES = (
    "tetrahedron",
    "octahedron",
    "cuboctahedron",
    "triangular prism",
    "hexagonal cap",
    "square pyramid",
    "truncated tetrahedron",
    "triangular dipyramid",
)

TYPE_F_VECTORS = {
    "tetrahedron": (4, 6, 4),
    "octahedron": (6, 12, 8),
    "cuboctahedron": (12, 24, 14),
    "triangular prism": (6, 9, 5),
    "hexagonal cap": (9, 15, 8),
    "square pyramid": (5, 8, 5),
    "truncated tetrahedron": (12, 18, 8),
    "triangular dipyramid": (5, 9, 6),
}

_REFERENCE_KEYS: dict[str, str] | None = None


def reference_polytopes() -> dict[str, tuple[int, list[frozenset]]]:
    return _reference_facets()


def reference_keys() -> dict[str, str]:
    global _REFERENCE_KEYS
    if _REFERENCE_KEYS is None:
        _REFERENCE_KEYS = {
            name: canonical_key(nv, facets) for name, (nv, facets) in _reference_facets().items()
        }
    return _REFERENCE_KEYS


@dataclass(frozen=True)
class CombinatorialType:
    name: str
    f_vector: tuple[int, int, int]
    key: str

    @property
    def is_named(self) -> bool:
        return self.name in TYPE_NAMES


def classify(poly: IdealPolytope) -> CombinatorialType:
    key = canonical_key(len(poly.vertices), poly.facets)
    for name, ref in reference_keys().items():
        if TYPE_F_VECTORS[name] == poly.f_vector and ref == key:
            return CombinatorialType(name, poly.f_vector, key)
    return CombinatorialType(f"other({key})", poly.f_vector, key)


# ---------------------------------------------------------------------------
# cusp orbits


def cusp_ideal(c: Cusp, ctx: FieldContext):
    if c.is_infinity:
        return ideal_from_generators([ctx.one])
    return ideal_from_generators([c.p, ctx(c.r)])


def cusp_orbit_count(graph: PerfectFormGraph, polytopes: Sequence[IdealPolytope] | None = None) -> int:
    """Number of ideal classes met by the vertices of all class polytopes."""
    ctx = graph.ctx
    if polytopes is None:
        polytopes = [build_polytope(pf) for pf in graph.classes]
    seen = []
    for poly in polytopes:
        for c in poly.vertices:
            I = cusp_ideal(c, ctx)
            if not any(same_ideal_class(I, J) for J in seen):
                seen.append(I)
    return len(seen)


# ---------------------------------------------------------------------------
# cells from vertex lists


def _line_generator(c: Cusp, ctx: FieldContext):
    """Rank-one point of the shortest integral vectors on the line through cusp ``c``."""
    from fractions import Fraction

    from .hermitian import rank_one
    from .lattice import short_vectors

    if c.is_infinity:
        return rank_one(ColumnVector(ctx.one, ctx.zero))
    # lambda * (p/r, 1) is integral iff lambda is in J = {lam in O : lam p in rO}
    r = c.r
    gens = [ctx(r, 0), ctx(0, r)]
    for x in range(r):
        for y in range(r):
            lam = ctx(x, y)
            prod = lam * c.p
            if (x or y) and int(prod.x) % r == 0 and int(prod.y) % r == 0:
                gens.append(lam)
    J = _z_span(gens, ctx)
    e1, e2 = J
    g11, g22 = e1.norm(), e2.norm()
    g12 = (e1 * e2.conj()).trace() / 2
    bound = min(g11, g22)
    nmin = short_vectors([[g11, g12], [g12, g22]], bound)[0][1]
    base = rank_one(ColumnVector(c.p / r, ctx.one))
    return base.scaled(Fraction(nmin))


def _z_span(elems, ctx):
    from .qfield import _hnf

    a, b, c = _hnf([e.int_coords() for e in elems])
    return ctx(a, 0), ctx(b, c)


def form_from_cusps(ctx: FieldContext, cusps: Sequence[Cusp]):
    """The form taking value 1 on the shortest integral vector of every cusp line.

    Returns None when these conditions do not determine a unique form.
    """
    from .hermitian import form_from_generators

    return form_from_generators(ctx, [_line_generator(c, ctx) for c in cusps])
