"""Polynomial weight functions w: Q^d -> Q."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .exactnum.rational import format_rational, parse_rational


@dataclass(frozen=True)
class PolyWeight:
    """Sparse polynomial: ``monomials`` is a tuple of (coefficient, exponent vector)."""

    arity: int
    monomials: tuple[tuple[Fraction, tuple[int, ...]], ...]

    def __init__(self, arity: int, monomials: Iterable[tuple[object, Sequence[int]]]):
        merged: dict[tuple[int, ...], Fraction] = {}
        for coeff, exps in monomials:
            exps = tuple(int(e) for e in exps)
            if len(exps) != arity:
                raise DimensionMismatch(f"monomial {exps} has arity {len(exps)}, expected {arity}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            merged[exps] = merged.get(exps, Fraction(0)) + parse_rational(coeff)
        mons = tuple(sorted(((c, e) for e, c in merged.items() if c != 0), key=lambda t: t[1]))
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "monomials", mons)

    @classmethod
    def coordinate(cls, arity: int, i: int, coeff=1) -> "PolyWeight":
        exps = [0] * arity
        exps[i] = 1
        return cls(arity, [(coeff, exps)])

    @classmethod
    def constant(cls, arity: int, c) -> "PolyWeight":
        return cls(arity, [(c, [0] * arity)])

    @property
    def degree(self) -> int:
        return max((sum(e) for _, e in self.monomials), default=0)

    def is_zero(self) -> bool:
        return not self.monomials

    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != self.arity:
            raise DimensionMismatch(f"point of length {len(x)} for weight of arity {self.arity}")
        total = Fraction(0)
        for c, exps in self.monomials:
            term = c
            for xi, e in zip(x, exps):
                if e:
                    term *= xi ** e
            total += term
        return total

    def eval_float(self, x: Sequence[float]) -> float:
        total = 0.0
        for c, exps in self.monomials:
            term = float(c)
            for xi, e in zip(x, exps):
                if e:
                    term *= xi ** e
            total += term
        return total

    def scale(self, c) -> "PolyWeight":
        c = Fraction(c)
        return PolyWeight(self.arity, [(k * c, e) for k, e in self.monomials])

    def __add__(self, other: "PolyWeight") -> "PolyWeight":
        if other.arity != self.arity:
            raise DimensionMismatch("weights of different arity")
        return PolyWeight(self.arity, list(self.monomials) + list(other.monomials))

    def gradient_l1_bound(self, box: Sequence[tuple[Fraction, Fraction]]) -> Fraction:
        """Upper bound of sum_i |dw/dx_i| over a box (used as an l-infinity Lipschitz constant)."""
        absmax = [max(abs(lo), abs(hi)) for lo, hi in box]
        total = Fraction(0)
        for c, exps in self.monomials:
            for i, e in enumerate(exps):
                if e:
                    term = abs(c) * e
                    for j, ej in enumerate(exps):
                        p = ej - 1 if j == i else ej
                        if p:
                            term *= absmax[j] ** p
                    total += term
        return total

    def to_json(self) -> list:
        return [{"coeff": format_rational(c), "exponents": list(e)} for c, e in self.monomials]

    @classmethod
    def from_json(cls, arity: int, data: list) -> "PolyWeight":
        return cls(arity, [(m["coeff"], m["exponents"]) for m in data])

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for c, exps in self.monomials:
            vars_ = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            parts.append(format_rational(c) + ("*" + vars_ if vars_ else ""))
        return " + ".join(parts)
