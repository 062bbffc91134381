from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

from latticeknots import catalog
from latticeknots.cli import main
from latticeknots.lattice import parse_word, read_knotw, to_knotw

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"


def _golden(name: str, text: str):
    path = GOLDEN / name
    if UPDATE:
        path.parent.mkdir(exist_ok=True)
        path.write_text(text, encoding="utf-8")
    assert path.exists(), f"missing golden file {name}; regenerate with UPDATE_GOLDEN=1"
    assert text == path.read_text(encoding="utf-8")


@pytest.fixture
def files(tmp_path):
    out = {}
    for e in catalog.entries():
        f = tmp_path / f"{e.name}.knotw"
        f.write_text(to_knotw(e.polygon))
        out[e.name] = f
    out["hexagon"] = tmp_path / "hexagon.knotw"
    out["hexagon"].write_text("lattice: sh\nx^1 y^1 z^1 x^-1 y^-1 z^-1\n")
    out["zpath"] = tmp_path / "z.knotw"
    out["zpath"].write_text("lattice: sh\nx^-1 y^1 z^-1\n")
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_classify_square(capsys, files):
    code, out, _ = run(capsys, "classify", files["square_cubic"])
    assert code == 0
    assert out.splitlines()[0] == "unknot, 4 sticks, 4 edges, det 1"


def test_classify_trefoil(capsys, files):
    code, out, _ = run(capsys, "classify", files["trefoil_sh11"])
    assert code == 0
    assert out.startswith("3_1, 11 sticks, 23 edges, det 3")
    assert "properly leveled: true" in out


def test_classify_json_golden(capsys, files):
    code, out, _ = run(capsys, "classify", "--json", files["trefoil_sh11"])
    assert code == 0
    rep = json.loads(out)
    assert rep["type"] == "3_1" and rep["determinant"] == 3 and rep["w_levels"] == [0, 1, 2, 3]
    _golden("classify_trefoil_sh11.json", out)


def test_classify_malformed(capsys, tmp_path):
    f = tmp_path / "bad.knotw"
    f.write_text("lattice: sh\nx^1 y^q\n")
    code, _, err = run(capsys, "classify", f)
    assert code == 1
    assert "'y^q'" in err and "byte offset 16" in err


def test_classify_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "classify", tmp_path / "nope.knotw")
    assert code == 1 and "cannot read" in err


def test_classify_invalid_polygon(capsys, tmp_path):
    f = tmp_path / "open.knotw"
    f.write_text("lattice: sh\nx^1 y^1\n")
    code, _, err = run(capsys, "classify", f)
    assert code == 1 and "not a valid polygon" in err


def test_transform_square_to_sh(capsys, files, tmp_path):
    out = tmp_path / "sq.knotw"
    code, _, err = run(capsys, "transform", files["square_cubic"], "--to", "sh", "-o", out)
    assert code == 0
    p = read_knotw(out)
    assert p.lattice == "sh" and p.word == "x^1 y^1 x^-1 y^-1"
    assert "sticks 4 -> 4, edges 4 -> 4" in err


def test_transform_round_trip_byte_identical(capsys, files, tmp_path):
    mid, back = tmp_path / "mid.knotw", tmp_path / "back.knotw"
    assert run(capsys, "transform", files["square_cubic"], "--to", "sh", "-o", mid)[0] == 0
    assert run(capsys, "transform", mid, "--to", "cubic", "-o", back)[0] == 0
    assert back.read_bytes() == files["square_cubic"].read_bytes()


def test_transform_z_sticks_need_rewrite(capsys, files, tmp_path):
    code, _, err = run(capsys, "transform", files["zpath"], "--to", "cubic")
    assert code == 1 and "ZSticksPresent" in err
    out = tmp_path / "tref.knotw"
    code, _, err = run(capsys, "transform", files["trefoil_sh11"], "--to", "cubic", "--rewrite", "-o", out)
    assert code == 0
    assert "type 3_1 -> 3_1" in err
    assert read_knotw(out).lattice == "cubic"


def test_reduce_corner_on_square(capsys, files, tmp_path):
    out, trace = tmp_path / "tri.knotw", tmp_path / "trace.jsonl"
    code, _, _ = run(capsys, "reduce", files["square_sh"], "--move", "corner", "-o", out, "--trace", trace)
    assert code == 0
    assert len(read_knotw(out)) == 3
    rec = json.loads(trace.read_text().splitlines()[0])
    assert rec["move_tag"] == "corner_to_z" and rec["sticks_delta"] == -1


def test_reduce_no_move_exit_code(capsys, files, tmp_path):
    trace = tmp_path / "trace.jsonl"
    code, _, err = run(capsys, "reduce", files["zpath"], "--move", "bevel", "--all", "--trace", trace)
    assert code == 2
    assert trace.read_text() == ""
    assert "no applicable" in err


def test_reduce_squeeze_cubic(capsys, files, tmp_path):
    out = tmp_path / "s.knotw"
    code, _, _ = run(capsys, "reduce", files["square_cubic"], "--move", "squeeze", "-o", out)
    assert code == 0
    assert read_knotw(out).lattice == "sh"
    assert len(read_knotw(out)) == 3


def test_reduce_all_zreplace(capsys, files, tmp_path):
    out, trace = tmp_path / "c.knotw", tmp_path / "t.jsonl"
    code, _, _ = run(capsys, "reduce", files["trefoil_sh11"], "--move", "zreplace", "--all", "-o", out,
                     "--trace", trace)
    assert code == 0
    assert "z" not in {s.dir for s in read_knotw(out).sticks}
    _golden("trace_trefoil_zreplace.jsonl", trace.read_text())


def test_reduce_bevel_trace_golden(capsys, files, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, _, _ = run(capsys, "reduce", files["trefoil_sh11"], "--move", "bevel", "-o", tmp_path / "b.knotw",
                     "--trace", trace)
    assert code == 0
    _golden("trace_trefoil_bevel.jsonl", trace.read_text())


def test_enumerate_unit_length(capsys, tmp_path):
    out = tmp_path / "c"
    code, _, err = run(capsys, "enumerate", "--sticks", "11", "--max-len", "1", "--out", out, "--no-timing",
                       "--expect-theorem")
    assert code == 0
    d = json.loads((out / "census.json").read_text())
    assert d["counts"] == {"unknot": 672}
    assert (out / "unknot_0.knotw").exists()
    _golden("census_L1.json", (out / "census.json").read_text())


def test_enumerate_shards_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "enumerate", "--max-len", "1", "--shards", "1", "--out", a, "--no-timing")[0] == 0
    assert run(capsys, "enumerate", "--max-len", "1", "--shards", "8", "--out", b, "--no-timing")[0] == 0
    assert (a / "census.json").read_bytes() == (b / "census.json").read_bytes()


def test_enumerate_config_error(capsys):
    code, _, err = run(capsys, "enumerate", "--sticks", "12")
    assert code == 1 and "ConfigError" in err


def test_enumerate_free_pattern(capsys):
    code, out, _ = run(capsys, "enumerate", "--sticks", "9", "--max-len", "1", "--pattern", "free", "--levels", "3",
                       "--census", "222,321,411,330,510,600")
    assert code == 0
    assert json.loads(out)["config"]["w_pattern"] is None


@pytest.mark.parametrize(
    "flag, value, line",
    [("--e-cubic", 24, "e_sh ≥ 12.75 → 13"), ("--s-cubic", 4, "s_sh ≥ 2 → 2"), ("--s-cubic", 12, "s_sh ≥ √57−3 → 5")],
)
def test_bounds(capsys, flag, value, line):
    code, out, _ = run(capsys, "bounds", flag, value)
    assert code == 0
    assert out.strip() == line


def test_bounds_errors(capsys):
    assert run(capsys, "bounds")[0] == 1
    assert run(capsys, "bounds", "--s-cubic", "0")[0] == 1


def test_render_square_golden(capsys, files, tmp_path):
    out = tmp_path / "sq.svg"
    assert run(capsys, "render", files["square_sh"], "-o", out)[0] == 0
    _golden("square_sh.svg", out.read_text())


def test_render_tilt(capsys, files, tmp_path):
    out = tmp_path / "t.svg"
    assert run(capsys, "render", files["trefoil_sh11"], "-o", out, "--plane", "tilt")[0] == 0
    assert 'data-crossings="5"' in out.read_text()


def test_render_unwritable(capsys, files, tmp_path):
    code, _, err = run(capsys, "render", files["square_sh"], "-o", tmp_path / "no" / "dir" / "x.svg")
    assert code == 1 and "cannot write" in err


def test_catalog_listing_and_check(capsys):
    code, out, _ = run(capsys, "catalog", "--check")
    assert code == 0
    assert "trefoil_sh11" in out
    code, out, _ = run(capsys, "catalog", "--show", "trefoil_sh11")
    assert code == 0
    assert parse_word(out).word == catalog.get("trefoil_sh11").word
    assert run(capsys, "catalog", "--show", "nothing")[0] == 1


def test_search_command(capsys, tmp_path):
    out = tmp_path / "u.knotw"
    code, _, _ = run(capsys, "search", "unknot", "--sticks", "6", "--max-len", "1", "--budget", "10000", "-o", out)
    assert code == 0
    assert read_knotw(out).lattice == "sh"
    code, _, err = run(capsys, "search", "3_1", "--sticks", "8", "--max-len", "1", "--budget", "5000")
    assert code == 2 and "no 3_1 found" in err
