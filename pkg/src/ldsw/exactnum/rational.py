"""Rational helpers on top of :class:`fractions.Fraction`."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    Floats are rejected: inputs must be exact.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"floats are not accepted as exact input: {text!r}")
    if not isinstance(text, str):
        raise ValueError(f"cannot parse {text!r} as a rational")
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            n, d = int(num.strip()), int(den.strip())
        except ValueError:
            raise ValueError(f"malformed rational {text!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(n, d)
    try:
        return Fraction(int(s))
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_rational_full(x: Fraction) -> str:
    """Always ``p/q``, including ``q = 1`` (used in CLI value output)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def as_fraction_vector(values: Iterable) -> list[Fraction]:
    return [parse_rational(v) if not isinstance(v, Fraction) else v for v in values]


def as_fraction_matrix(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [as_fraction_vector(r) for r in rows]


def dyadic_floor(x: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that is <= x."""
    scale = 1 << bits
    return Fraction((x.numerator * scale) // x.denominator, scale)


def dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-x.numerator * scale) // x.denominator), scale)
