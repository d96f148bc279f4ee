import json
import math
import subprocess
import sys

import numpy as np
import pytest

from framepert.cli import main
from framepert.fileformat import FamilyFile, dump_family_file


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def write(path, vectors, **kw):
    v = np.asarray(vectors, dtype=float)
    dump_family_file(path, FamilyFile(v.shape[1], v, **kw))
    return path


def test_bounds_onb(tmp_path, capsys):
    code, rep, _ = run(capsys, "bounds", write(tmp_path / "e.json", np.eye(3)))
    assert code == 0
    assert rep["frame_bounds"] == [1, 1] and rep["is_frame"] and rep["is_riesz"]
    assert set(rep) == {"frame_bounds", "is_frame", "riesz_bounds", "is_riesz", "sequence_bounds", "excess", "rank"}
    assert rep["excess"] == 0 and rep["rank"] == 3


def test_bounds_zero_family(tmp_path, capsys):
    code, rep, _ = run(capsys, "bounds", write(tmp_path / "z.json", np.zeros((2, 2))))
    assert code == 0 and rep["sequence_bounds"] is None and not rep["is_frame"]


def test_bounds_malformed(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"dimension": 2, "vectors": [[1, 0], [1]]}')
    code, rep, err = run(capsys, "bounds", p)
    assert code == 2 and rep is None and "vectors[1]" in err


def test_certify_identical_files(tmp_path, capsys):
    f = write(tmp_path / "f.json", np.random.default_rng(0).standard_normal((5, 3)))
    code, rep, _ = run(capsys, "certify", "thm21", f, f)
    assert code == 0 and rep["hypothesis_values"]["mu"] == 0
    assert list(rep) == ["theorem", "hypothesis_values", "hypothesis_ok", "predicted", "actual", "enclosed", "extras", "series_traces"]


def test_certify_remark22_exports(tmp_path, capsys):
    code, summary, _ = run(capsys, "gallery", "remark22", "--depth", 6, "--out", tmp_path)
    assert code == 0
    code, rep, _ = run(capsys, "certify", "thm21", tmp_path / "f.json", tmp_path / "h.json")
    assert code == 0 and rep["hypothesis_values"]["mu"] < 1
    code, rep, _ = run(capsys, "certify", "qc", tmp_path / "f.json", tmp_path / "h.json")
    assert code == 1 and rep["hypothesis_values"]["lambda"] > 1


def test_certify_errors(tmp_path, capsys):
    a = write(tmp_path / "a.json", np.eye(2))
    b = write(tmp_path / "b.json", np.eye(3))
    c = write(tmp_path / "c.json", np.eye(2)[:1])
    assert run(capsys, "certify", "nope", a, a)[0] == 2
    assert run(capsys, "certify", "thm21", a, b)[0] == 2
    assert run(capsys, "certify", "thm21", a, c)[0] == 2
    # Schauder theorem without functionals
    assert run(capsys, "certify", "thm31", a, a)[0] == 2


@pytest.mark.parametrize("theorem", ["pw", "christensen", "fz", "qc", "nearriesz", "gap", "riesz", "thm21"])
def test_certify_every_hilbert_theorem(tmp_path, capsys, theorem):
    rng = np.random.default_rng(1)
    x = np.eye(3) + 0.1 * rng.standard_normal((3, 3))
    f = write(tmp_path / "f.json", x)
    h = write(tmp_path / "h.json", x + 0.01 * rng.standard_normal((3, 3)))
    code, rep, _ = run(capsys, "certify", theorem, f, h)
    assert code == 0 and rep["theorem"] == theorem and rep["hypothesis_ok"]


def test_certify_christensen_flags(tmp_path, capsys):
    f = write(tmp_path / "f.json", np.eye(2))
    g = write(tmp_path / "g.json", [[1.1, 0], [0, 1]])
    code, rep, _ = run(capsys, "certify", "christensen", f, g, "--lambda", 0, "--mu", 0.1, "--seed", 3)
    assert code == 0 and rep["predicted"] == pytest.approx([0.81, 1.21])
    assert rep["extras"]["seed"] == 3
    code, _, _ = run(capsys, "certify", "christensen", f, g, "--lambda", 0, "--mu", 0.01)
    assert code == 1


@pytest.mark.parametrize("p", ["1", "2", "inf"])
def test_certify_schauder(tmp_path, capsys, p):
    code, _, _ = run(capsys, "gallery", "ex31", "--depth", 4, "--out", tmp_path)
    assert code == 0
    pair, pert = tmp_path / "pair.json", tmp_path / "perturbed.json"
    for thm in ("thm31", "thm33"):
        code, rep, _ = run(capsys, "certify", thm, pair, pert, "--p", p)
        assert rep["theorem"] == thm and code in (0, 1)
        if rep["hypothesis_ok"]:
            assert code == 0 and rep["extras"]["checks"]["reconstruction"]
    code, rep, _ = run(capsys, "certify", "thm31", pair, pert)
    assert code == 0
    g = write(tmp_path / "g.json", np.ones((10, 4)), functionals=np.array(json.loads(pair.read_text())["functionals"]) * 1.05)
    code, rep, _ = run(capsys, "certify", "thm34", pair, g)
    assert rep["theorem"] == "thm34" and code == (0 if rep["hypothesis_ok"] else 1)


def test_gallery_ex22_ratios(tmp_path, capsys):
    code, summary, _ = run(capsys, "gallery", "ex22", "--depth", 5, "--out", tmp_path)
    assert code == 0
    assert summary["ratios"] == pytest.approx([1, 1 / 9, 1 / 25, 1 / 49, 1 / 81], abs=1e-12)
    assert json.loads((tmp_path / "summary.json").read_text()) == summary


def test_gallery_ex21_tight(tmp_path, capsys):
    run(capsys, "gallery", "ex21", "--depth", 2, "--out", tmp_path)
    code, rep, _ = run(capsys, "bounds", tmp_path / "f.json")
    assert code == 0 and rep["frame_bounds"] == pytest.approx([1, 1], abs=1e-9)


def test_gallery_unknown_and_too_deep(tmp_path, capsys):
    assert run(capsys, "gallery", "nope", "--out", tmp_path)[0] == 2
    assert run(capsys, "gallery", "ex21", "--depth", 7, "--out", tmp_path)[0] == 2


def test_gallery_dichotomy(tmp_path, capsys):
    code, summary, _ = run(capsys, "gallery", "dichotomy", "--depth", 3, "--out", tmp_path)
    assert code == 0 and summary["ratios_match"] and summary["codim"] == 6
    assert sorted(p.name for p in tmp_path.iterdir()) == ["f.json", "g.json", "h.json", "summary.json"]


@pytest.mark.parametrize("name, depth", [("ex21", 2), ("remark22", 4), ("ex22", 3), ("ex31", 3)])
def test_round_trip_bit_for_bit(tmp_path, capsys, name, depth):
    _, summary, _ = run(capsys, "gallery", name, "--depth", depth, "--out", tmp_path)
    for key, fname in (("f", "f.json"), ("h", "h.json"), ("g", "g.json")):
        if key in summary:
            _, rep, _ = run(capsys, "bounds", tmp_path / fname)
            assert rep == summary[key]
    if "thm21" in summary:
        code, rep, _ = run(capsys, "certify", "thm21", tmp_path / "f.json", tmp_path / "h.json")
        assert code == summary["thm21"]["exit_code"]
        assert rep["series_traces"]["mu"]["partial_sums"][-1] == summary["traces"]["mu"]["partial_sums"][-1]


def test_gap_command(tmp_path, capsys):
    e1 = write(tmp_path / "e1.json", [[1.0, 0.0]])
    e2 = write(tmp_path / "e2.json", [[0.0, 1.0]])
    th = write(tmp_path / "th.json", [[math.cos(0.3), math.sin(0.3)]])
    code, rep, _ = run(capsys, "gap", e1, e1)
    assert code == 0 and rep["delta"] == pytest.approx(0, abs=1e-15) and rep["sigma_min_projection"] == pytest.approx(1)
    assert run(capsys, "gap", e1, e2)[1]["delta"] == pytest.approx(1)
    rep = run(capsys, "gap", th, e1)[1]
    assert abs(rep["delta"] - 0.29552020666133955) <= 1e-9
    assert set(rep) == {"delta", "dim_K", "dim_L", "sigma_min_projection"}
    b = write(tmp_path / "b.json", np.eye(3))
    assert run(capsys, "gap", e1, b)[0] == 2


def test_console_entry_point(tmp_path):
    f = write(tmp_path / "f.json", np.eye(2))
    proc = subprocess.run(
        [sys.executable, "-m", "framepert", "bounds", str(f)], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["is_frame"] and proc.stderr == ""
    proc = subprocess.run(
        [sys.executable, "-m", "framepert", "bounds", str(tmp_path / "missing.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 2 and proc.stdout == "" and "ParseError" in proc.stderr
