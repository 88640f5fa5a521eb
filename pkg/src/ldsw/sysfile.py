"""System files: JSON descriptions of a linear dynamical system and its weight.

Example::

    {
      "kind": "general",
      "matrix": [["3/5", "-4/5"], ["4/5", "3/5"]],
      "initial": ["1", "0"],
      "weight": [{"coeff": "1", "exponents": [1, 0]}],
      "discount": "1/2",
      "budget": "3"
    }

``kind`` is ``general`` (default) or ``stochastic``; ``discount`` and ``budget``
are optional.  Rationals are strings ``"p/q"`` or ``"p"`` (plain integers are
accepted too, floats are not).  Errors carry the line and column of the
offending value.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .errors import ParseError
from .exactnum.rational import format_rational, parse_rational
from .polyweight import PolyWeight

KINDS = ("general", "stochastic")
_KEYS = {"kind", "matrix", "initial", "weight", "discount", "budget"}
_WS = " \t\r\n"


def _locate(text: str, path: tuple) -> tuple[int, int]:
    """(line, column) of the JSON value at ``path`` (keys and indices), 1-based."""
    dec = json.JSONDecoder()

    def skip(i):
        while i < len(text) and text[i] in _WS:
            i += 1
        return i

    pos = skip(0)
    for step in path:
        if pos >= len(text):
            break
        if text[pos] == "{":
            i = skip(pos + 1)
            found = None
            while i < len(text) and text[i] != "}":
                key, i = dec.raw_decode(text, i)
                i = skip(i)
                i = skip(i + 1)  # ':'
                if key == step:
                    found = i
                    break
                _, i = dec.raw_decode(text, i)
                i = skip(i)
                if i < len(text) and text[i] == ",":
                    i = skip(i + 1)
            if found is None:
                break
            pos = found
        elif text[pos] == "[":
            i = skip(pos + 1)
            idx = 0
            found = None
            while i < len(text) and text[i] != "]":
                if idx == step:
                    found = i
                    break
                _, i = dec.raw_decode(text, i)
                i = skip(i)
                if i < len(text) and text[i] == ",":
                    i = skip(i + 1)
                idx += 1
            if found is None:
                break
            pos = found
        else:
            break
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


@dataclass(frozen=True)
class SystemFile:
    matrix: tuple[tuple[Fraction, ...], ...]
    initial: tuple[Fraction, ...]
    weight: PolyWeight
    kind: str = "general"
    discount: Optional[Fraction] = None
    budget: Optional[Fraction] = None

    @property
    def dimension(self) -> int:
        return len(self.initial)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "kind": self.kind,
            "matrix": [[format_rational(x) for x in r] for r in self.matrix],
            "initial": [format_rational(x) for x in self.initial],
            "weight": self.weight.to_json(),
        }
        if self.discount is not None:
            out["discount"] = format_rational(self.discount)
        if self.budget is not None:
            out["budget"] = format_rational(self.budget)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SystemFile):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(self.dumps())


def _rational(text: str, value, path: tuple) -> Fraction:
    try:
        return parse_rational(value)
    except ValueError as e:
        raise ParseError(str(e), *_locate(text, path)) from None


def loads(text: str) -> SystemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", *_locate(text, ()))
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise ParseError(f"unknown key {unknown[0]!r}", *_locate(text, ()))
    for key in ("matrix", "initial", "weight"):
        if key not in data:
            raise ParseError(f"missing key {key!r}", *_locate(text, ()))
    kind = data.get("kind", "general")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}", *_locate(text, ("kind",)))
    rows = data["matrix"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("matrix must be a non-empty list of rows", *_locate(text, ("matrix",)))
    d = len(rows)
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"row {i} must have {d} entries", *_locate(text, ("matrix", i)))
        matrix.append(tuple(_rational(text, x, ("matrix", i, j)) for j, x in enumerate(row)))
    init = data["initial"]
    if not isinstance(init, list) or len(init) != d:
        raise ParseError(f"initial must have {d} entries", *_locate(text, ("initial",)))
    initial = tuple(_rational(text, x, ("initial", j)) for j, x in enumerate(init))
    wdata = data["weight"]
    if not isinstance(wdata, list):
        raise ParseError("weight must be a list of monomials", *_locate(text, ("weight",)))
    monos = []
    for k, m in enumerate(wdata):
        where = ("weight", k)
        if not isinstance(m, dict) or set(m) != {"coeff", "exponents"}:
            raise ParseError("monomial needs exactly 'coeff' and 'exponents'", *_locate(text, where))
        c = _rational(text, m["coeff"], where + ("coeff",))
        e = m["exponents"]
        if (not isinstance(e, list) or len(e) != d
                or any(not isinstance(x, int) or isinstance(x, bool) or x < 0 for x in e)):
            raise ParseError(f"exponents must be {d} nonnegative integers", *_locate(text, where + ("exponents",)))
        monos.append((c, tuple(e)))
    discount = _rational(text, data["discount"], ("discount",)) if "discount" in data else None
    budget = _rational(text, data["budget"], ("budget",)) if "budget" in data else None
    return SystemFile(tuple(matrix), initial, PolyWeight(d, monos), kind, discount, budget)


def load(path) -> SystemFile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)
