import csv
import io
import math
import os
import subprocess

import pytest

import entconc


def test_occupations():
    occ = entconc.occupations(10, 2)
    assert occ["n1"] == pytest.approx(80 / 81, rel=1e-15)
    assert occ["nm"] == pytest.approx(8 / 81, rel=1e-15)
    assert occ["zeta"] == pytest.approx(80 / 169, rel=1e-15)
    assert occ["n2"] - occ["n1"] - occ["nm"] == 0.0


def test_closed_forms():
    z = 80 / 169
    closed = math.log((1 + math.sqrt(z)) / (1 - math.sqrt(z)))
    assert entconc.perfect_entanglement(10, 2, 0) == pytest.approx(closed, abs=1e-10)
    assert entconc.off_entanglement(10, 2) == entconc.perfect_entanglement(10, 2, 0)
    assert entconc.pre_measurement_entanglement(10, 2) == pytest.approx(1.6025869375, abs=1e-9)


def test_numeric_routes():
    e = entconc.imperfect_entanglement_numeric(10, 2, 1.0, 1, eps_trunc=1e-24)
    assert e == pytest.approx(entconc.perfect_entanglement(10, 2, 1), abs=1e-9)
    num = entconc.on_entanglement(100, 5, "numeric")
    avg = entconc.on_entanglement(100, 5, "average")
    assert abs(num - avg) / num < 0.01
    direct, gauss = entconc.omega_factor(10, 2, 50)
    assert abs(gauss - 0.5) < 0.05 and direct > 0


def test_errors():
    with pytest.raises(ValueError, match="stability violated"):
        entconc.occupations(5, 6)
    with pytest.raises(ValueError):
        entconc.imperfect_outcome_prob(10, 2, 0.0, 1)
    with pytest.raises(ValueError):
        entconc.perfect_entanglement_gaussian(10, 0, 1)
    assert issubclass(entconc.NumericalFailure, ArithmeticError)


def test_point_and_sweep():
    doc = entconc.point(10, 2, q=0, methods=["exact", "pre"])
    assert doc["values"]["e_perfect"] == pytest.approx(1.68838, abs=1e-5)
    cols, rows = entconc.sweep(10, 2, "q", 0, 4, methods="exact")
    assert cols == ["axis", "e_perfect", "prob", "trunc_deficit"]
    assert [r[0] for r in rows] == [0, 1, 2, 3, 4]
    assert all(a[1] < b[1] for a, b in zip(rows, rows[1:]))
    text = entconc.to_csv(cols, rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == cols and len(parsed) == 6


def test_manifest_matches_preset_output():
    man = entconc.manifest()
    assert man["schema_version"] == entconc.SCHEMA_VERSION
    fig5 = next(p for p in man["presets"] if p["name"] == "fig5")
    cols, rows = entconc.preset("fig5")
    assert cols == fig5["csv_columns"]
    assert len(rows) == 39


@pytest.mark.skipif("ENTCONC_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_matches_bindings():
    out = subprocess.run(
        [os.environ["ENTCONC_CLI"], "sweep", "--c1", "10", "--c2", "2", "--axis", "q",
         "--start", "0", "--stop", "4", "--methods", "exact"],
        check=True, capture_output=True, text=True).stdout
    cols, rows = entconc.sweep(10, 2, "q", 0, 4, methods="exact")
    assert out == entconc.to_csv(cols, rows)
