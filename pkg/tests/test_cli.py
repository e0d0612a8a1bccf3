import json

import numpy as np
import pytest

from perron_eig.cli import run
from perron_eig.errors import ParseError, UnsupportedFormatError
from perron_eig.matio import (
    fixture_path,
    format_matrix_market,
    load_fixture,
    parse_matrix,
    read_csv,
    read_matrix_market,
)


def _json(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_csv_and_mm_basics(tmp_path):
    p = tmp_path / "i.csv"
    p.write_text("# identity\n1,0\n0,1\n")
    assert np.array_equal(parse_matrix(p), np.eye(2))
    col = read_matrix_market("%%MatrixMarket matrix array real general\n3 1\n1\n2\n3\n")
    assert col.shape == (3, 1) and list(col[:, 0]) == [1, 2, 3]
    assert load_fixture("ex53")[4, 3] == 3.0


def test_column_major(tmp_path):
    a = read_matrix_market("%%MatrixMarket matrix array real general\n% c\n2 2\n1\n2\n3\n4\n")
    assert np.array_equal(a, [[1, 3], [2, 4]])


def test_parse_errors():
    with pytest.raises(ParseError, match="line 3"):
        read_csv("1,2\n3,4\n5\n")
    with pytest.raises(ParseError, match="line 1"):
        read_matrix_market("%%MatrixMarket matrix\n")
    with pytest.raises(ParseError):
        read_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n")
    with pytest.raises(ParseError, match="line 3"):
        read_matrix_market("%%MatrixMarket matrix array real general\n1 1\nx\n")
    with pytest.raises(UnsupportedFormatError):
        read_matrix_market("%%MatrixMarket matrix array complex general\n1 1\n1 0\n")
    with pytest.raises(UnsupportedFormatError):
        read_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n")


def test_round_trip_is_bit_exact(tmp_path, rng):
    a = rng.normal(size=(4, 3)) * 10.0 ** rng.integers(-300, 300, size=(4, 3))
    p = tmp_path / "a.mtx"
    p.write_text(format_matrix_market(a))
    assert np.array_equal(parse_matrix(p), a)
    for name in ("ex51", "ex81_y"):
        assert np.array_equal(read_matrix_market(format_matrix_market(load_fixture(name))),
                              load_fixture(name))


def test_estimate(capsys):
    d = _json(capsys, ["estimate", "-m", str(fixture_path("ex53")), "--n", "100"])
    assert d["schema"] == "perron-eig/1"
    assert d["spectral_estimate"]["s_n"] == pytest.approx(2.0203, abs=5e-5)
    assert d["inputs"]["n"] == 100 and d["wall_time_s"] >= 0


def test_cyclic_order_and_oracle(capsys):
    d = _json(capsys, ["cyclic-order", "-m", "fixture:ex53", "--N", "100", "--eps", "0.1"])
    assert d["cyclic_order"]["detected_nu"] == 3
    d = _json(capsys, ["oracle", "-m", "fixture:ex81"])["oracle"]
    assert d["s"] == pytest.approx(2.0) and d["alg_multiplicity"] == 5 and d["nu_true"] == 3


def test_refine_and_eigenspace(capsys, tmp_path):
    d = _json(capsys, ["refine", "-m", "fixture:ex53"])
    assert abs(d["refinement"]["s_refined"] - 2) < 1e-5
    out = tmp_path / "basis.mtx"
    d = _json(capsys, ["eigenspace", "-m", "fixture:ex81", "--t-end", "150",
                       "--basis-out", str(out)])
    assert d["eigenspace"]["dim_estimate"] == 5
    assert parse_matrix(out).shape == (7, 5)


def test_trace_csv(capsys, tmp_path):
    out = tmp_path / "t.csv"
    assert run(["trace", "-m", "fixture:ex53", "--kind", "rayleigh", "--n", "4", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,rayleigh" and len(lines) == 6
    assert run(["trace", "-m", "fixture:ex53", "--t-end", "3", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,tau" and len(lines) == 5


def test_reports_are_deterministic(capsys):
    a = _json(capsys, ["estimate", "-m", "fixture:ex52", "--init", "fixture:ex52_v"])
    b = _json(capsys, ["estimate", "-m", "fixture:ex52", "--init", "fixture:ex52_v"])
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert a == b


def test_exit_codes(tmp_path, capsys):
    assert run(["estimate", "-m", str(tmp_path / "missing.mtx")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert run(["estimate", "-m", str(bad)]) == 2
    assert run(["estimate", "-m", "fixture:ex53", "--n", "0"]) == 1
    sing = tmp_path / "s.csv"
    sing.write_text("1,1\n1,1\n")
    assert run(["estimate", "-m", "fixture:ex53", "--init", str(sing)]) == 1
    assert "error" in capsys.readouterr().err
