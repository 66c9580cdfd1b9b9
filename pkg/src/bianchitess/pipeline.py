"""Per-field runs, the on-disk cache, table rendering and geometry export."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .errors import TessError
from .polytope import TYPE_NAMES, IdealPolytope, build_polytope, classify, cusp_orbit_count
from .qfield import class_number, make_context
from .voronoi import enumerate_classes

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
ENGINE_VERSION = f"bianchitess-{__version__}"
CACHE_ENV = "BIANCHITESS_CACHE"

# the field list computed in the original tables
PAPER_RANGE = sorted(
    {
        -n
        for n in list(range(1, 101)) + [115, 123, 163, 187, 235, 267, 403, 427]
        if n == 1 or all(n % (p * p) for p in range(2, int(n**0.5) + 1))
    },
    key=abs,
)


def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, "tess-cache"))


@dataclass
class TessellationReport:
    d: int
    discriminant: int
    class_number: int
    total_classes: int
    type_counts: dict[str, int]
    classes: list[dict]
    cusp_orbits: int
    duration: float = 0.0
    engine: str = ENGINE_VERSION

    def canonical_dict(self) -> dict:
        """Everything except wall-clock time; this is what gets hashed."""
        return {
            "schema": SCHEMA_VERSION,
            "engine": self.engine,
            "d": self.d,
            "discriminant": self.discriminant,
            "class_number": self.class_number,
            "total_classes": self.total_classes,
            "type_counts": self.type_counts,
            "cusp_orbits": self.cusp_orbits,
            "classes": self.classes,
        }

    def to_json(self) -> str:
        return json.dumps(self.canonical_dict(), sort_keys=True, indent=1)

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: dict, duration: float = 0.0) -> "TessellationReport":
        return cls(
            d=data["d"],
            discriminant=data["discriminant"],
            class_number=data["class_number"],
            total_classes=data["total_classes"],
            type_counts=dict(data["type_counts"]),
            classes=list(data["classes"]),
            cusp_orbits=data["cusp_orbits"],
            duration=duration,
            engine=data["engine"],
        )


def _elem(z) -> list[str]:
    return [str(z.x), str(z.y)]


def _cusp_record(c) -> dict:
    if c.is_infinity:
        return {"infinity": True, "text": "oo"}
    x, y = c.p.int_coords()
    return {"infinity": False, "p": [x, y], "r": c.r, "text": str(c)}


def _class_record(pf, poly: IdealPolytope, kind, stab) -> dict:
    return {
        "type": kind.name,
        "f_vector": list(poly.f_vector),
        "form": {"a": str(pf.form.a), "b": _elem(pf.form.b), "c": str(pf.form.c)},
        "minimal_vector_count": len(pf.minimal.vectors),
        "cusps": [_cusp_record(c) for c in poly.vertices],
        "facets": poly.facet_cycles(),
        "edges": [list(e) for e in poly.faces[1]],
        "stabilizer": {
            "order": stab.order,
            "cyclic": stab.cyclic,
            "generator": stab.generator.omega_coords(),
        },
    }


def run_field(d: int) -> TessellationReport:
    """Full computation for ``Q(sqrt(d))``."""
    t0 = time.perf_counter()
    ctx = make_context(d)
    graph = enumerate_classes(ctx)
    polys = [build_polytope(pf) for pf in graph.classes]
    kinds = [classify(p) for p in polys]
    counts = {name: 0 for name in TYPE_NAMES}
    for k in kinds:
        counts[k.name] = counts.get(k.name, 0) + 1
    records = [
        _class_record(pf, poly, kind, stab)
        for pf, poly, kind, stab in zip(graph.classes, polys, kinds, graph.stabilizers)
    ]
    report = TessellationReport(
        d=ctx.d,
        discriminant=ctx.discriminant,
        class_number=class_number(ctx),
        total_classes=len(graph.classes),
        type_counts=counts,
        classes=records,
        cusp_orbits=cusp_orbit_count(graph, polys),
        duration=time.perf_counter() - t0,
    )
    return report


# ---------------------------------------------------------------------------
# cache and manifest


def _cache_root(cache_dir: Path) -> Path:
    return Path(cache_dir) / f"schema{SCHEMA_VERSION}-{ENGINE_VERSION}"


def cache_path(cache_dir: Path, d: int) -> Path:
    return _cache_root(cache_dir) / f"d{abs(d)}.json"


class CacheCorrupted(TessError):
    pass


def save_report(report: TessellationReport, cache_dir: Path) -> Path:
    path = cache_path(cache_dir, report.d)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"hash": report.content_hash(), "duration": report.duration, "report": report.canonical_dict()}
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True, indent=1))
    tmp.replace(path)
    return path


def load_report(cache_dir: Path, d: int) -> TessellationReport | None:
    path = cache_path(cache_dir, d)
    if not path.exists():
        return None
    payload = json.loads(path.read_text())
    report = TessellationReport.from_dict(payload["report"], payload.get("duration", 0.0))
    if report.content_hash() != payload.get("hash"):
        raise CacheCorrupted(f"hash mismatch in {path}")
    return report


def load_all_reports(cache_dir: Path) -> list[TessellationReport]:
    root = _cache_root(cache_dir)
    if not root.exists():
        return []
    out = []
    for path in root.glob("d*.json"):
        d = -int(path.stem[1:])
        rep = load_report(cache_dir, d)
        if rep is not None:
            out.append(rep)
    out.sort(key=lambda r: abs(r.d))
    return out


@dataclass
class RunManifest:
    requested: list[int]
    status: dict[int, list[str]] = field(default_factory=dict)
    cache_paths: dict[int, str] = field(default_factory=dict)
    from_cache: dict[int, bool] = field(default_factory=dict)
    errors: dict[int, str] = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def advance(self, d: int, state: str) -> None:
        history = self.status.setdefault(d, [])
        history.append(state)

    def final(self, d: int) -> str:
        return self.status.get(d, ["pending"])[-1]

    @property
    def done(self) -> list[int]:
        return [d for d in self.requested if self.final(d) == "done"]

    @property
    def failed(self) -> list[int]:
        return [d for d in self.requested if self.final(d) == "failed"]

    def to_dict(self) -> dict:
        return {
            "requested": self.requested,
            "entries": [
                {
                    "d": d,
                    "status": self.status.get(d, ["pending"]),
                    "cache_path": self.cache_paths.get(d),
                    "from_cache": self.from_cache.get(d, False),
                    "error": self.errors.get(d),
                }
                for d in self.requested
            ],
            "config": self.config,
        }


def _compute_one(d: int, cache_dir: str, force: bool):
    """Worker: returns (d, state, cache_path, from_cache, error)."""
    try:
        if not force:
            try:
                cached = load_report(Path(cache_dir), d)
            except (CacheCorrupted, KeyError, ValueError):
                cached = None
            if cached is not None:
                return d, "done", str(cache_path(Path(cache_dir), d)), True, None
        report = run_field(d)
        path = save_report(report, Path(cache_dir))
        return d, "done", str(path), False, None
    except Exception as exc:  # recorded, not raised: partial failure is tolerated
        log.warning("d=%s failed: %s", d, exc)
        return d, "failed", None, False, f"{type(exc).__name__}: {exc}"


def run_range(ds: Iterable[int], jobs: int = 1, cache_dir: Path | None = None,
              force: bool = False) -> RunManifest:
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    ds = sorted(dict.fromkeys(int(d) for d in ds), key=lambda d: (abs(d), d))
    manifest = RunManifest(ds, config={"jobs": jobs, "cache": str(cache_dir), "force": force,
                                       "engine": ENGINE_VERSION})
    for d in ds:
        manifest.advance(d, "pending")
        manifest.advance(d, "running")
    if jobs > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_compute_one, ds, [str(cache_dir)] * len(ds), [force] * len(ds)))
    else:
        results = [_compute_one(d, str(cache_dir), force) for d in ds]
    for d, state, path, hit, err in sorted(results, key=lambda r: abs(r[0])):
        manifest.advance(d, state)
        if path:
            manifest.cache_paths[d] = path
        manifest.from_cache[d] = hit
        if err:
            manifest.errors[d] = err
    root = _cache_root(cache_dir)
    root.mkdir(parents=True, exist_ok=True)
    (root / "manifest.json").write_text(json.dumps(manifest.to_dict(), sort_keys=True, indent=1))
    return manifest


# ---------------------------------------------------------------------------
# tables


def table_rows(reports: Sequence[TessellationReport]) -> tuple[list[str], list[list]]:
    extra = sorted({k for r in reports for k, v in r.type_counts.items() if k not in TYPE_NAMES and v})
    header = ["h_F", "d", *TYPE_NAMES, *extra]
    rows = []
    for r in sorted(reports, key=lambda r: (r.class_number, abs(r.d))):
        rows.append([r.class_number, r.d, *(r.type_counts.get(k, 0) for k in TYPE_NAMES),
                     *(r.type_counts.get(k, 0) for k in extra)])
    return header, rows


def render_table(reports: Sequence[TessellationReport], format: str = "markdown") -> str:
    header, rows = table_rows(reports)
    if format == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=1) + "\n"
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if format in ("md", "markdown"):
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(str(v) for v in row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {format!r}")


# ---------------------------------------------------------------------------
# geometry export


def boundary_point(rec: dict, d: int) -> list[float] | None:
    """Complex coordinate ``p/r`` of a cusp as ``[re, im]``; None for infinity."""
    if rec["infinity"]:
        return None
    ctx = make_context(d)
    x, y = rec["p"]
    z = ctx(x, y) / rec["r"]
    c = z.to_complex()
    return [c.real, c.imag]


def klein_point(rec: dict, d: int) -> list[float]:
    """Cusp on the unit sphere (inverse stereographic projection, infinity at the north pole).

    Ideal polytopes have planar faces in the Klein model, so the OFF meshes
    are honest flat-faced solids; the projection is for display only.
    """
    z = boundary_point(rec, d)
    if z is None:
        return [0.0, 0.0, 1.0]
    x, y = z
    s = x * x + y * y
    return [2 * x / (s + 1), 2 * y / (s + 1), (s - 1) / (s + 1)]


def _outward(pts, faces):
    """Reverse any face whose vertex order winds clockwise seen from outside."""
    n = len(pts)
    centre = [sum(p[k] for p in pts) / n for k in range(3)]
    out = []
    for f in faces:
        a, b, c = (pts[i] for i in f[:3])
        u = [b[k] - a[k] for k in range(3)]
        v = [c[k] - a[k] for k in range(3)]
        normal = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
        side = sum(normal[k] * (a[k] - centre[k]) for k in range(3))
        out.append(list(f) if side >= 0 else list(reversed(f)))
    return out


def export_geometry(report: TessellationReport, out_dir: Path, off: bool = True) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, rec in enumerate(report.classes):
        cusps = []
        for c in rec["cusps"]:
            entry = dict(c)
            entry["boundary"] = boundary_point(c, report.d)
            cusps.append(entry)
        doc = {
            "d": report.d,
            "class_index": i,
            "type": rec["type"],
            "f_vector": rec["f_vector"],
            "cusps": cusps,
            "faces": {"edges": rec["edges"], "facets": rec["facets"]},
            "stabilizer": rec["stabilizer"],
        }
        path = out_dir / f"d{abs(report.d)}_class{i:03d}.json"
        path.write_text(json.dumps(doc, sort_keys=True, indent=1))
        written.append(path)
        if off:
            pts = [klein_point(c, report.d) for c in rec["cusps"]]
            lines = ["OFF", f"{len(pts)} {len(rec['facets'])} {len(rec['edges'])}"]
            lines += [" ".join(f"{v:.15g}" for v in p) for p in pts]
            lines += [" ".join(map(str, [len(f), *f])) for f in _outward(pts, rec["facets"])]
            opath = out_dir / f"d{abs(report.d)}_class{i:03d}.off"
            opath.write_text("\n".join(lines) + "\n")
            written.append(opath)
    return written
