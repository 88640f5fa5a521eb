"""Command-line behaviour: golden outputs, exit codes, round trips.

Regenerate the golden files with ``python3 tests/test_cli.py --regen`` after an
intentional output change, and review the diff.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from ldsw import sysfile
from ldsw.cli import parse_gaussian, run
from ldsw.errors import ParseError

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

# name -> (argv, exit code)
CASES = {
    "classify_worked": (["classify", "worked.json"], 0),
    "classify_swap": (["classify", "swap.json"], 0),
    "classify_grow": (["classify", "grow.json"], 0),
    "meanpayoff_worked": (["meanpayoff", "worked.json"], 0),
    "meanpayoff_circle": (["meanpayoff", "--method", "exact", "circle.json"], 0),
    "meanpayoff_x1sq_integral": (["meanpayoff", "--method", "integral", "--eps", "1/1000", "x1sq.json"], 0),
    "meanpayoff_swap_stochastic": (["meanpayoff", "--method", "stochastic", "swap.json"], 0),
    "meanpayoff_grow": (["meanpayoff", "grow.json"], 1),
    "total_worked": (["total", "worked.json"], 0),
    "total_grow": (["total", "grow.json"], 1),
    "discounted_worked": (["discounted", "--delta", "1/2", "worked.json"], 0),
    "energy_worked": (["energy", "worked.json"], 0),
    "energy_violated": (["energy", "energy_viol.json"], 1),
    "energy_zero_min_tail": (["energy", "--horizon", "1000", "zero_min_tail.json"], 2),
    "integrand_worked": (["integrand", "x1sq.json"], 0),
    "genhard_diophantine": (["genhard", "diophantine", "--lambda", "3/5+4/5i", "--r", "2"], 0),
    "genhard_positivity": (["genhard", "positivity", "swap.json"], 0),
}


def _argv(argv):
    return [str(DATA / a) if a.endswith(".json") else a for a in argv]


def invoke(argv, capsys):
    code = run(_argv(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    argv, expected = CASES[name]
    code, out, err = invoke(argv, capsys)
    assert code == expected, err
    assert out == (GOLDEN / f"{name}.out").read_text()


def test_deterministic(capsys):
    first = invoke(["classify", "worked.json"], capsys)
    second = invoke(["classify", "worked.json"], capsys)
    assert first == second


def test_acceptance_values(capsys):
    def value(argv):
        code, out, _ = invoke(argv, capsys)
        assert code == 0
        return json.loads(out)["value"]
    assert value(["meanpayoff", "worked.json"]) == "0/1"
    assert value(["total", "worked.json"]) == "2/1"
    assert value(["meanpayoff", "circle.json"]) == "1/1"
    assert value(["meanpayoff", "--method", "stochastic", "swap.json"]) == "1/2"


def test_classify_fields(capsys):
    _, out, _ = invoke(["classify", "worked.json"], capsys)
    rep = json.loads(out)
    assert rep["bounded"] is True
    assert sorted(e["modulus"] for e in rep["eigenvalues"]) == ["<1", "=1", "=1"]
    _, out, _ = invoke(["classify", "swap.json"], capsys)
    rep = json.loads(out)
    assert rep["stochastic"] and rep["chain"]["irreducible"] and rep["chain"]["period"] == 2
    _, out, _ = invoke(["classify", "grow.json"], capsys)
    assert json.loads(out)["bounded"] is False


@pytest.mark.parametrize("argv", [
    ["meanpayoff", "--method", "stochastic", "worked.json"],   # incompatible method
    ["meanpayoff", "--method", "integral", "grow.json"],       # not bounded
    ["total", "float.json"],                                   # float literal
    ["total", "missing.json"],
    ["meanpayoff", "--eps", "0.001", "worked.json"],           # float flag
    ["discounted", "worked.json"],                             # no discount anywhere
    ["discounted", "--delta", "3/2", "worked.json"],
    ["bogus"],
])
def test_input_errors_exit_3(argv, capsys):
    code, out, _ = invoke(argv, capsys)
    assert code == 3 and out == ""


def test_parse_error_has_location(capsys):
    code, _, err = invoke(["total", "float.json"], capsys)
    assert code == 3 and "line 3" in err
    with pytest.raises(ParseError) as e:
        sysfile.load(DATA / "float.json")
    assert (e.value.line, e.value.column) == (3, 20)


def test_genhard_round_trip(tmp_path, capsys):
    out = tmp_path / "d4.json"
    code, _, _ = invoke(["genhard", "--out", str(out), "diophantine", "--lambda", "3/5+4/5i", "--r", "2"], capsys)
    assert code == 0
    parsed = sysfile.load(out)
    assert parsed.dimension == 4
    assert sysfile.loads(parsed.dumps()) == parsed
    assert parsed.dumps() == out.read_text()


def test_energy_high_dimension(tmp_path, capsys):
    path = tmp_path / "d4.json"
    invoke(["genhard", "diophantine", "--lambda", "3/5+4/5i", "--r", "0", "--out", str(path)], capsys)
    code, out, _ = invoke(["energy", "--horizon", "2000", str(path)], capsys)
    rep = json.loads(out)
    assert code == 2 and rep["reason"] == "dimension > 3: falsification only"
    assert rep["prefix"] == {"horizon": 2000, "witness": None}
    invoke(["genhard", "diophantine", "--lambda", "3/5+4/5i", "--r", "-1000000", "--out", str(path)], capsys)
    code, out, _ = invoke(["energy", str(path)], capsys)
    assert code == 1 and json.loads(out)["witness"] == 0


def test_search_bound_flag(capsys):
    code, out, _ = invoke(["integrand", "--search-bound", "8", "x1sq.json"], capsys)
    assert code == 0 and json.loads(out)["m"] == 1


@pytest.mark.parametrize("text,value", [
    ("3/5+4/5i", (F(3, 5), F(4, 5))), ("1", (F(1), F(0))), ("i", (F(0), F(1))),
    ("-2/3i", (F(0), F(-2, 3))), ("1-i", (F(1), F(-1))), ("-1/2-3i", (F(-1, 2), F(-3))),
])
def test_parse_gaussian(text, value):
    assert parse_gaussian(text) == value


@pytest.mark.parametrize("text", ["", "3/5+4/5", "1.5+2i", "i3", "2i+1", "3/5++4/5i"])
def test_parse_gaussian_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_gaussian(text)


def test_sysfile_round_trip():
    for path in sorted(DATA.glob("*.json")):
        if path.name == "float.json":
            continue
        sf = sysfile.load(path)
        assert sysfile.loads(sf.dumps()) == sf


def _regen() -> None:
    import contextlib
    import io
    GOLDEN.mkdir(exist_ok=True)
    for name, (argv, _) in sorted(CASES.items()):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = run(_argv(argv))
        (GOLDEN / f"{name}.out").write_text(buf.getvalue())
        print(name, code)


if __name__ == "__main__" and "--regen" in sys.argv:
    _regen()
