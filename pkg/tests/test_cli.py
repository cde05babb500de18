import json
import math

import pytest

from symcap.cli import main


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_capacity_of_simplex(tmp_path, capsys):
    f = write(tmp_path, "simplex_pi.json", '{"type": "simplex", "level": 3.141592653589793, "dim": 3}')
    assert main(["capacity", "--region", f, "--csv", "-"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "region,capacity,provenance"
    name, value, _ = lines[1].split(",", 2)
    assert name == "simplex_pi" and float(value) == pytest.approx(math.pi, abs=1e-12)


def test_capacity_of_concave_region(tmp_path, capsys):
    f = write(tmp_path, "g.json", '{"type": "graph2d", "a": 4, "f": "(2 - sqrt(x))**2"}')
    assert main(["capacity", "--region", f, "--json", "-"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["capacity"] == pytest.approx(2.0, rel=1e-9)
    assert out["class"] == "Concave" and out["quantities"]["upper_bound"] == pytest.approx(4.0)


def test_capacity_of_cube_product(tmp_path, capsys):
    f = write(tmp_path, "b.json", '{"type": "lp_ball", "dim": 3, "p": 1.5}')
    assert main(["capacity", "--body", f]) == 0
    assert "capacity 4" in capsys.readouterr().out


def test_capacity_input_errors(tmp_path, capsys):
    assert main(["capacity", "--region", str(tmp_path / "missing.json")]) == 2
    bad = write(tmp_path, "bad.json", '{"type": "box", "upper": [1, -1]}')
    assert main(["capacity", "--region", bad]) == 2
    broken = write(tmp_path, "broken.json", '{"type": "box",\n "upper": [1, 2}')
    assert main(["capacity", "--region", broken]) == 2
    assert "line 2" in capsys.readouterr().err
    wavy = write(tmp_path, "wavy.json", '{"type": "graph2d", "a": 1, "f": "1 - x + 0.1*sin(2*pi*x)"}')
    assert main(["capacity", "--region", wavy]) == 2
    assert main(["capacity"]) == 2


def test_mahler(capsys):
    assert main(["mahler", "--lp", "2", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(8.0)
    assert main(["mahler", "--lp", "3", "1.5", "--csv", "-"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "n,p,mahler,phi,derivative"
    assert main(["mahler", "--lp", "3", "0.5"]) == 2
    assert main(["mahler", "--lp", "0", "2"]) == 2


def test_mahler_of_body(tmp_path, capsys):
    f = write(tmp_path, "h.json", '{"type": "hanner", "spec": [1, "inf", 1]}')
    assert main(["mahler", "--body", f]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(4 ** 4 / 24, rel=1e-12)


def test_phi_scan(tmp_path, capsys):
    svg = tmp_path / "phi.svg"
    assert main(["phi-scan", "--n", "2", "3", "--grid", "50", "--csv", "-", "--svg", str(svg)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,p,mahler,phi,derivative"
    assert len(lines) == 101
    assert svg.read_text().startswith("<svg") and "polyline" in svg.read_text()


def test_xp(capsys):
    assert main(["xp", "--p", "2", "--check-area", "--seed", "7", "--mc-samples", "200000"]) == 0
    out = capsys.readouterr().out
    assert "branch values" in out and "within 3 sigma" in out
    assert main(["xp", "--p", "inf", "--curve-points", "11", "--csv", "-"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "v,w1,w2" and len(lines) == 12


def test_xp_rejects_bad_p():
    with pytest.raises(SystemExit) as info:
        main(["xp", "--p", "0.5"])
    assert info.value.code == 2


def test_verify_csv_and_determinism(capsys):
    argv = ["verify", "--suite", "hanner", "mc-volume", "--mc-samples", "100000", "--csv", "-"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv + ["--threads", "4"]) == 0
    assert capsys.readouterr().out == first
    assert first.splitlines()[0] == "claim_id,slack,tolerance,passed"
    assert all(line.endswith(",true") for line in first.splitlines()[1:])


def test_verify_unknown_suite(capsys):
    assert main(["verify", "--suite", "nope"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_verify_reports_failures(capsys, monkeypatch):
    from symcap import suites
    from symcap.records import VerificationRecord

    monkeypatch.setitem(suites.SUITES, "broken", lambda cfg: [VerificationRecord.boolean("demo", False)])
    assert main(["verify", "--suite", "broken"]) == 1
    assert '"claim_id": "demo"' in capsys.readouterr().err
