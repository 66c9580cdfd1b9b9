import json
from fractions import Fraction

import pytest

from bianchitess.cli import main, parse_range
from bianchitess.pipeline import (
    PAPER_RANGE,
    CacheCorrupted,
    TessellationReport,
    cache_path,
    export_geometry,
    load_all_reports,
    load_report,
    render_table,
    run_range,
)
from bianchitess.polytope import TYPE_NAMES
from bianchitess.qfield import make_context
from conftest import report_for


def nonzero(report):
    return {k: v for k, v in report.type_counts.items() if v}


def test_run_field_examples():
    r = report_for(-7)
    assert r.total_classes == 1 and nonzero(r) == {"triangular prism": 1}
    r = report_for(-23)
    assert nonzero(r) == {"octahedron": 1, "triangular prism": 1, "square pyramid": 1}
    assert r.class_number == 3 and r.cusp_orbits == 3


def test_run_field_d67():
    r = report_for(-67)
    assert nonzero(r) == {"octahedron": 1, "triangular prism": 2, "hexagonal cap": 1,
                          "square pyramid": 2, "truncated tetrahedron": 1}
    assert r.total_classes == 7 == sum(r.type_counts.values())


def test_report_records():
    r = report_for(-14)
    assert len(r.classes) == 9
    orders = sorted(c["stabilizer"]["order"] for c in r.classes)
    assert orders == [2] * 7 + [4, 6]
    for c in r.classes:
        assert len(c["cusps"]) == c["f_vector"][0]
        (a, b), (cc, dd) = c["stabilizer"]["generator"]
        assert all(len(e) == 2 and all(isinstance(v, int) for v in e) for e in (a, b, cc, dd))


def test_determinism():
    from bianchitess.pipeline import run_field

    a, b = run_field(-14), run_field(-14)
    assert a.to_json() == b.to_json()
    assert a.content_hash() == b.content_hash()


def test_run_range_and_cache(tmp_path):
    m = run_range([-1, -2, -3], cache_dir=tmp_path)
    assert m.done == [-1, -2, -3] and not m.failed
    assert not any(m.from_cache.values())
    reports = {r.d: r for r in load_all_reports(tmp_path)}
    assert nonzero(reports[-1]) == {"octahedron": 1}
    assert nonzero(reports[-2]) == {"cuboctahedron": 1}
    assert nonzero(reports[-3]) == {"tetrahedron": 1}
    for d in (-1, -2, -3):
        assert m.status[d] == ["pending", "running", "done"]

    again = run_range([-3, -2, -1], cache_dir=tmp_path)
    assert all(again.from_cache.values())
    assert again.done == m.done and again.cache_paths == m.cache_paths
    manifest = json.loads((cache_path(tmp_path, -1).parent / "manifest.json").read_text())
    assert [e["d"] for e in manifest["entries"]] == [-1, -2, -3]


def test_run_range_partial_failure(tmp_path):
    m = run_range([-4, -7], cache_dir=tmp_path)
    assert m.failed == [-4] and m.done == [-7]
    assert "NotSquareFree" in m.errors[-4]
    assert m.status[-4][-1] == "failed"


def test_cache_hash_is_verified(tmp_path):
    run_range([-3], cache_dir=tmp_path)
    path = cache_path(tmp_path, -3)
    payload = json.loads(path.read_text())
    payload["report"]["total_classes"] = 2
    path.write_text(json.dumps(payload))
    with pytest.raises(CacheCorrupted):
        load_report(tmp_path, -3)
    # a corrupted entry is recomputed rather than trusted
    m = run_range([-3], cache_dir=tmp_path)
    assert m.done == [-3] and not m.from_cache[-3]
    assert load_report(tmp_path, -3).total_classes == 1


def test_render_empty():
    for fmt in ("md", "csv", "json"):
        out = render_table([], fmt)
        assert "1" not in out.replace("h_F", "")
    assert render_table([], "csv").strip() == ",".join(["h_F", "d", *TYPE_NAMES])


def test_render_rows():
    md = render_table([report_for(-11)], "md").splitlines()
    header = [c.strip() for c in md[0].strip("|").split("|")]
    row = [c.strip() for c in md[2].strip("|").split("|")]
    assert row[header.index("truncated tetrahedron")] == "1"
    assert sum(int(v) for v in row[2:]) == 1
    csv_text = render_table([report_for(-14)], "csv")
    assert csv_text.splitlines()[1] == "4,-14,5,0,0,3,0,1,0,0"
    ordered = render_table([report_for(-14), report_for(-7), report_for(-23)], "csv").splitlines()[1:]
    assert [line.split(",")[1] for line in ordered] == ["-7", "-23", "-14"]
    assert render_table([report_for(-7)], "json") == render_table([report_for(-7)], "json")
    with pytest.raises(ValueError):
        render_table([], "xml")


def test_export_round_trip(tmp_path):
    r = report_for(-3)
    files = export_geometry(r, tmp_path)
    jsons = [f for f in files if f.suffix == ".json"]
    assert len(jsons) == 1
    doc = json.loads(jsons[0].read_text())
    assert doc["type"] == "tetrahedron" and len(doc["cusps"]) == 4
    # exact fields survive serialization unchanged
    assert [{k: c[k] for k in c if k != "boundary"} for c in doc["cusps"]] == r.classes[0]["cusps"]
    assert doc["faces"]["edges"] == r.classes[0]["edges"]
    clone = TessellationReport.from_dict(json.loads(r.to_json()))
    assert clone.to_json() == r.to_json()


def test_export_float_accuracy(tmp_path):
    r = report_for(-14)
    ctx = make_context(-14)
    for path in export_geometry(r, tmp_path, off=False):
        doc = json.loads(path.read_text())
        for c in doc["cusps"]:
            if c["infinity"]:
                assert c["boundary"] is None
                continue
            z = ctx(*c["p"]) / c["r"]
            re, im = z.sqrtd_coords()
            exact_re, exact_im2 = re, im * im * 14
            got_re, got_im = c["boundary"]
            assert abs(Fraction(got_re) - exact_re) <= Fraction(1, 10**12) * max(1, abs(exact_re))
            assert abs(Fraction(got_im) ** 2 - exact_im2) <= Fraction(1, 10**11) * max(1, exact_im2)


def test_off_faces_outward(tmp_path):
    for path in export_geometry(report_for(-43), tmp_path):
        if path.suffix != ".off":
            continue
        lines = path.read_text().splitlines()
        assert lines[0] == "OFF"
        nv, nf, _ = map(int, lines[1].split())
        pts = [list(map(float, l.split())) for l in lines[2:2 + nv]]
        centre = [sum(p[k] for p in pts) / nv for k in range(3)]
        for line in lines[2 + nv:2 + nv + nf]:
            idx = list(map(int, line.split()))[1:]
            a, b, c = (pts[i] for i in idx[:3])
            u = [b[k] - a[k] for k in range(3)]
            v = [c[k] - a[k] for k in range(3)]
            n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
            assert sum(n[k] * (a[k] - centre[k]) for k in range(3)) > 0


def test_paper_range():
    assert len(PAPER_RANGE) == 69
    assert PAPER_RANGE[:3] == [-1, -2, -3] and PAPER_RANGE[-1] == -427
    assert -4 not in PAPER_RANGE and -163 in PAPER_RANGE


def test_parse_range():
    assert parse_range("-1..-10") == [-1, -2, -3, -5, -6, -7, -10]


def test_cli(tmp_path, capsys):
    cache = str(tmp_path / "c")
    assert main(["--cache", cache, "run", "--d", "-3", "--d", "-7"]) == 0
    assert main(["--cache", cache, "run", "--d", "-7"]) == 0
    assert "(cached)" in capsys.readouterr().out
    assert main(["--cache", cache, "run", "--d", "-4"]) == 2
    assert main(["--cache", cache, "run", "--range", "-1..-3", "--class-number", "1"]) == 0
    capsys.readouterr()
    assert main(["--cache", cache, "report", "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("h_F,d,tetrahedron")
    assert [l.split(",")[1] for l in out[1:]] == ["-1", "-2", "-3", "-7"]
    assert main(["--cache", cache, "export", "--geometry", str(tmp_path / "g"), "--d", "-3"]) == 0
    assert sorted(p.name for p in (tmp_path / "g").iterdir()) == ["d3_class000.json", "d3_class000.off"]
    assert main(["--cache", cache, "run"]) == 1
    assert main(["--cache", cache, "run", "--d", "-3", "--jobs", "0"]) == 1
    assert main(["bogus"]) == 1
